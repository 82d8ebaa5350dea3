#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bisimlab/game/position.hpp"
#include "bisimlab/pcp/instance.hpp"
#include "bisimlab/pds/semantics.hpp"
#include "bisimlab/pds/system.hpp"

namespace bisimlab::pcp {

enum class FirstOrderStyle { epsilon_family, direct_schema };

std::string to_string(FirstOrderStyle s);  // "eps" / "schema"
FirstOrderStyle parse_style(const std::string& s);

struct ReductionOptions {
  int order = 1;
  FirstOrderStyle style = FirstOrderStyle::epsilon_family;  // order 1 only
  bool normed = false;
};

/// Every name the constructions use, for an instance with n pairs.
struct ReductionNames {
  pds::ControlState q0, q0p, t, q_u, q_v, z, r, rp, q, qp, qpp, p, pp, q_pop;
  std::vector<pds::ControlState> p_i;  // p_i[k-1] is p_k
  std::vector<pds::StackSymbol> I;     // I[k-1] is I_k
  pds::StackSymbol A, B, bottom;
  pds::Action g, s, a, b, c, c1, c2, h, d, e, f;
  std::vector<pds::Action> a_i;  // a_i[k-1] is a_k

  static ReductionNames for_size(std::size_t n);

  /// k when x is I_k, otherwise 0.
  int index_of(pds::StackSymbol x) const;
  /// k when q is p_k, otherwise 0.
  int generator_index(pds::ControlState q) const;
  /// k when a is a_k, otherwise 0.
  int action_index(pds::Action act) const;
  pds::StackSymbol letter(char c) const { return c == 'A' ? A : B; }
  std::vector<pds::StackSymbol> letters(const Word& w) const;
};

struct ReductionOutput {
  PcpInstance instance;
  ReductionOptions options;
  ReductionNames names;
  std::shared_ptr<const pds::PushdownSystem> system;
  std::vector<std::size_t> framed_rules;  // ascending
  game::Position start;
  /// CollapsedLts over `system`, or the schema generator for the direct style.
  std::shared_ptr<const pds::Lts> lts;
};

ReductionOutput build_first_order(const PcpInstance& inst, const ReductionOptions& opts);
ReductionOutput build_second_order(const PcpInstance& inst, const ReductionOptions& opts);
/// Dispatches on opts.order.
ReductionOutput build_reduction(const PcpInstance& inst, const ReductionOptions& opts);

/// Reads i1..il (bottom first) from a stack of shape I_il ... I_i1 ⊥.
/// Throws MalformedInput for any other shape.
IndexSequence index_sequence(const ReductionNames& names, const pds::Stack& s);
/// Inverse of index_sequence.
pds::Stack index_stack(const ReductionNames& names, const IndexSequence& seq);

/// Switch targets q_v[w I_im ... I_i1 ⊥] for m = l-1 down to 0 and w over the suffixes of
/// reverse(v_{i_{m+1}}), longest first. `c` must have control q0 or q0' over one I*⊥ stack.
std::vector<pds::Configuration> switch_targets(const PcpInstance& inst, const pds::Configuration& c);

/// Order-1 collapsed LTS that adds the s-moves of q0 / q0' from switch_targets (framed on q0).
class SchemaLts final : public pds::Lts {
 public:
  SchemaLts(std::shared_ptr<const pds::PushdownSystem> sys, std::vector<std::size_t> framed, PcpInstance inst);

  std::vector<pds::Transition> transitions(const pds::Configuration& c) const override;
  const pds::PushdownSystem& system() const override { return base_.system(); }

 private:
  pds::CollapsedLts base_;
  PcpInstance inst_;
  ReductionNames names_;
};

/// Sidecar manifest: instance, options, symbol map, framed rule indices, start pair.
nlohmann::ordered_json manifest_json(const ReductionOutput& out);
/// Rebuilds the reduction a manifest describes. When `system` is given it must equal the
/// rebuilt system (ValidationError otherwise).
ReductionOutput reduction_from_manifest(const nlohmann::ordered_json& manifest,
                                        const pds::PushdownSystem* system = nullptr);

}  // namespace bisimlab::pcp
