#pragma once

#include <httplib.h>

#include "bisimlab/service/play.hpp"

namespace bisimlab::service {

/// POST /sessions, GET|DELETE /sessions/{id}, POST /sessions/{id}/moves, GET /instances.
void install_routes(httplib::Server& server, SessionRegistry& registry);

}  // namespace bisimlab::service
