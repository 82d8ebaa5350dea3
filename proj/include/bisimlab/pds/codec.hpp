#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bisimlab/pds/configuration.hpp"
#include "bisimlab/pds/system.hpp"

namespace bisimlab::pds {

/// A parsed PDS file: the system plus the optional `start` lines (first = left, second = right).
struct PdsFile {
  PushdownSystem system;
  std::vector<Configuration> starts;
};

/// Line-oriented format:
///   order 1|2
///   start <control> <stack>[;<stack>]*
///   rule <p> <X> <action|eps> <q> <alpha-symbols|->
///   rule <p> <X> <action> <q> push|pop
///   wild <p> <action|eps> <q> <alpha-symbols|->
/// `#` starts a comment. Names are declared by first use. Errors carry line and column.
PdsFile parse_pds(std::string_view text);

/// Inverse of parse_pds on normalized systems; wild rules stay symbolic.
std::string render_pds(const PushdownSystem& sys, const std::vector<Configuration>& starts = {});

}  // namespace bisimlab::pds
