#include "bisimlab/service/http.hpp"

#include "bisimlab/error.hpp"

namespace bisimlab::service {
namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& what) {
  reply(res, status, Json{{"error", what}});
}

/// Runs `f`, mapping library exceptions to HTTP statuses.
template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const nlohmann::json::exception& e) {
    reply_error(res, 400, e.what());
  } catch (const MalformedInput& e) {
    reply_error(res, 400, e.what());
  } catch (const ValidationError& e) {
    reply_error(res, 400, e.what());
  } catch (const IllegalMove& e) {
    reply_error(res, 409, e.what());
  } catch (const BudgetExceeded& e) {
    reply_error(res, 503, e.what());
  }
}

}  // namespace

void install_routes(httplib::Server& server, SessionRegistry& registry) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/instances", [](const httplib::Request&, httplib::Response& res) {
    Json out = Json::object();
    for (const auto& [name, pairs] : builtin_instances()) {
      auto& list = out[name] = Json::array();
      for (const auto& p : pairs) list.push_back({p.u, p.v});
    }
    reply(res, 200, out);
  });

  server.Post("/sessions", [&registry](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
      const std::string id = registry.create(body);
      registry.with(id, [&](PlayController& play) {
        Json state = play.state();
        Json out{{"id", id}};
        out.update(state);
        reply(res, 201, out);
      });
    });
  });

  server.Get(R"(/sessions/([^/]+))", [&registry](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const bool found = registry.with(id, [&](PlayController& play) {
      Json out{{"id", id}};
      out.update(play.state());
      reply(res, 200, out);
    });
    if (!found) reply_error(res, 404, "unknown session " + id);
  });

  server.Delete(R"(/sessions/([^/]+))", [&registry](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (registry.erase(id)) {
      res.status = 204;
    } else {
      reply_error(res, 404, "unknown session " + id);
    }
  });

  server.Post(R"(/sessions/([^/]+)/moves)", [&registry](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const bool found = registry.with(id, [&](PlayController& play) {
      guarded(res, [&] {
        play.submit(play.resolve(Json::parse(req.body)));
        Json out{{"id", id}};
        out.update(play.state());
        reply(res, 200, out);
      });
    });
    if (!found) reply_error(res, 404, "unknown session " + id);
  });
}

}  // namespace bisimlab::service
