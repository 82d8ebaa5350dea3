#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "bisimlab/error.hpp"
#include "bisimlab/game/json.hpp"
#include "bisimlab/game/solver.hpp"
#include "bisimlab/pcp/reduction.hpp"
#include "bisimlab/pds/codec.hpp"
#include "bisimlab/service/http.hpp"
#include "bisimlab/service/play.hpp"
#include "bisimlab/strategy/simulate.hpp"

namespace fs = std::filesystem;
using namespace bisimlab;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitDefender = 0;
constexpr int kExitAttacker = 1;
constexpr int kExitError = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write " + path);
  out << text;
}

std::string manifest_path_for(const std::string& system_path) {
  return fs::path(system_path).replace_extension(".manifest.json").string();
}

struct Loaded {
  std::shared_ptr<const pds::PushdownSystem> system;
  std::shared_ptr<const pds::Lts> lts;
  std::vector<pds::Configuration> starts;
  std::optional<pcp::ReductionOutput> reduction;
};

/// System file plus its manifest when one exists (explicit path, or <stem>.manifest.json).
Loaded load_system(const std::string& path, const std::string& manifest) {
  const std::string text = read_file(path);
  pds::PdsFile file = [&] {
    try {
      return pds::parse_pds(text);
    } catch (const MalformedInput& e) {
      throw MalformedInput(path + ":" + e.what());
    }
  }();
  Loaded out;
  const std::string mpath = manifest.empty() ? manifest_path_for(path) : manifest;
  if (!manifest.empty() || fs::exists(mpath)) {
    Json m;
    try {
      m = Json::parse(read_file(mpath));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedInput(mpath + ": " + e.what());
    }
    auto red = pcp::reduction_from_manifest(m, &file.system);
    out.system = red.system;
    out.lts = red.lts;
    out.reduction = std::move(red);
  } else {
    out.system = std::make_shared<const pds::PushdownSystem>(std::move(file.system));
    out.lts = std::make_shared<pds::CollapsedLts>(out.system);
  }
  out.starts = std::move(file.starts);
  return out;
}

game::Position start_position(const Loaded& sys, const std::string& left, const std::string& right) {
  std::optional<pds::Configuration> l, r;
  if (!left.empty()) l = pds::parse_configuration(left);
  if (!right.empty()) r = pds::parse_configuration(right);
  if (!l && !sys.starts.empty()) l = sys.starts[0];
  if (!r && sys.starts.size() > 1) r = sys.starts[1];
  if (!l || !r) throw MalformedInput("no start pair: give two start lines or --left/--right");
  sys.system->check_configuration(*l);
  sys.system->check_configuration(*r);
  return {*l, *r};
}


// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string instance;
  int order = 1;
  std::string style = "eps";
  bool normed = false;
  std::string out;
  std::string manifest;
};

int cmd_reduce(const ReduceArgs& a) {
  const std::string source = read_file(a.instance);
  const auto inst = [&] {
    try {
      return pcp::parse_instance(source);
    } catch (const MalformedInput& e) {
      throw MalformedInput(a.instance + ":" + e.what());
    }
  }();
  pcp::ReductionOptions opts{a.order, pcp::parse_style(a.style), a.normed};
  const auto red = pcp::build_reduction(inst, opts);
  const std::string text = pds::render_pds(*red.system, {red.start.left, red.start.right});
  const Json manifest = pcp::manifest_json(red);
  if (a.out.empty()) {
    std::cout << text;
    return 0;
  }
  write_file(a.out, text);
  const std::string mpath = a.manifest.empty() ? manifest_path_for(a.out) : a.manifest;
  write_file(mpath, manifest.dump(2) + "\n");
  std::cout << "wrote " << a.out << " (" << red.system->rules().size() << " rules, " << red.framed_rules.size()
            << " framed) and " << mpath << "\n";
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string system;
  std::string manifest;
  int depth = 24;
  bool no_eq = false;
  bool json = false;
  bool parallel = false;
  std::string left, right;
  std::string certificate;
  std::size_t memo_cap = 8'000'000;
};

int cmd_solve(const SolveArgs& a) {
  const Loaded sys = load_system(a.system, a.manifest);
  const auto pos = start_position(sys, a.left, a.right);
  game::SolveOptions opts;
  opts.equality_shortcircuit = !a.no_eq;
  opts.parallel = a.parallel;
  opts.memo_capacity = a.memo_cap;
  const auto verdict = game::decide_game(sys.lts, pos, a.depth, opts);

  Json report;
  report["start"] = game::position_json(pos);
  report["rounds"] = a.depth;
  report["equality_shortcircuit"] = opts.equality_shortcircuit;
  report.update(game::verdict_json(verdict));
  std::string cert_path;
  if (verdict.attacker_wins()) {
    cert_path = a.certificate.empty() ? fs::path(a.system).replace_extension(".cert.json").string() : a.certificate;
    Json cert{{"start", game::position_json(pos)}, {"depth", verdict.depth}, {"certificate", game::certificate_json(*verdict.certificate)}};
    write_file(cert_path, cert.dump() + "\n");
    report["certificate"] = cert_path;
  } else {
    report["certificate"] = nullptr;
  }
  if (a.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << game::to_string(verdict) << "\n";
    if (verdict.attacker_wins()) {
      std::cout << "certificate: " << cert_path << " (" << report["certificate_nodes"].get<std::size_t>()
                << " nodes, hash " << report["certificate_hash"].get<std::string>() << ")\n";
    }
  }
  return verdict.attacker_wins() ? kExitAttacker : kExitDefender;
}

// ---------------------------------------------------------------- play / serve

struct PlayArgs {
  std::string system;
  std::string manifest;
  std::string instance;
  int order = 1;
  std::string style = "eps";
  bool normed = false;
  std::string role = "attacker";
  std::string opponent;
  std::string oracle = "1";
  std::uint64_t seed = 0;
  int max_rounds = 200;
  std::string left, right;
};

service::Arena arena_for(const PlayArgs& a) {
  if (!a.instance.empty()) {
    return service::arena_from_request(Json{{"instance", a.instance}, {"order", a.order}, {"style", a.style}, {"normed", a.normed}});
  }
  if (a.system.empty()) throw MalformedInput("give a system file or --instance");
  const Loaded sys = load_system(a.system, a.manifest);
  return {sys.lts, start_position(sys, a.left, a.right), sys.reduction};
}

int cmd_play(const PlayArgs& a) {
  service::PlayOptions opts = service::play_options_from_json(
      Json{{"role", a.role}, {"opponent", a.opponent}, {"oracle", a.oracle}, {"seed", a.seed}, {"maxRounds", a.max_rounds}});
  service::PlayController play(arena_for(a), opts);
  service::run_stdio(play, std::cin, std::cout);
  return 0;
}

int cmd_serve(const std::string& host, int port) {
  service::SessionRegistry registry;
  httplib::Server server;
  service::install_routes(server, registry);
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw MalformedInput("cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string system;
  std::string manifest;
  std::string attacker = "switch";
  std::string defender = "random";
  std::string oracle = "1";
  std::uint64_t seed = 0;
  int runs = 1;
  int rounds = 200;
  bool json = false;
  bool transcript = false;
  std::string left, right;
};

int cmd_simulate(const SimulateArgs& a) {
  const Loaded sys = load_system(a.system, a.manifest);
  const auto pos = start_position(sys, a.left, a.right);
  Json runs = Json::array();
  std::map<std::string, int> tally;
  for (int i = 0; i < a.runs; ++i) {
    strategy::AgentContext ctx{sys.lts, sys.reduction, std::nullopt, a.seed + static_cast<std::uint64_t>(i)};
    if (sys.reduction && a.defender == "forcing") ctx.oracle = strategy::parse_oracle(sys.reduction->instance, a.oracle);
    auto attacker = strategy::make_agent(a.attacker, game::Role::attacker, ctx);
    auto defender = strategy::make_agent(a.defender, game::Role::defender, ctx);
    const auto trace = strategy::simulate(sys.lts, pos, *attacker, *defender, {a.rounds, true});
    ++tally[strategy::to_string(trace.result)];
    if (a.transcript) std::cout << strategy::transcript(trace);
    Json t = strategy::trace_json(trace);
    t["seed"] = ctx.seed;
    runs.push_back(std::move(t));
  }
  if (a.json) {
    Json out{{"attacker", a.attacker}, {"defender", a.defender}, {"seed", a.seed}, {"runs", runs}};
    out["summary"] = tally;
    std::cout << out.dump(2) << "\n";
  } else if (!a.transcript) {
    for (const auto& r : runs) {
      std::cout << "seed " << r["seed"].get<std::uint64_t>() << ": " << r["result"].get<std::string>() << " ("
                << r["reason"].get<std::string>() << ") round " << r["rounds"].get<int>() << "\n";
    }
  }
  for (const auto& [k, v] : tally) std::cerr << k << ": " << v << "/" << a.runs << "\n";
  return 0;
}

// ---------------------------------------------------------------- export

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

int cmd_export(const std::string& system, const std::string& manifest, int depth, std::size_t limit, const std::string& dot,
               const std::string& left, const std::string& right) {
  const Loaded sys = load_system(system, manifest);
  std::vector<pds::Configuration> roots;
  if (!left.empty() || !right.empty()) {
    const auto pos = start_position(sys, left, right);
    roots = {pos.left, pos.right};
  } else {
    roots = sys.starts;
  }
  if (roots.empty()) throw MalformedInput("nothing to export: no start lines and no --left/--right");

  std::vector<pds::Configuration> nodes;
  std::vector<int> dist;
  bool truncated = false;
  for (const auto& root : roots) {
    const auto r = pds::reachable_parallel(*sys.lts, root, depth, limit);
    truncated = truncated || r.truncated;
    for (std::size_t i = 0; i < r.configs.size(); ++i) {
      if (std::find(nodes.begin(), nodes.end(), r.configs[i]) == nodes.end()) {
        nodes.push_back(r.configs[i]);
        dist.push_back(r.distance[i]);
      }
    }
  }
  std::ostringstream g;
  g << "digraph lts {\n  // depth=" << depth << " nodes=" << nodes.size() << " truncated=" << (truncated ? "true" : "false") << "\n";
  g << "  label=\"depth " << depth << (truncated ? ", truncated" : "") << "\";\n  node [shape=box, fontname=monospace];\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const bool root = std::find(roots.begin(), roots.end(), nodes[i]) != roots.end();
    g << "  n" << i << " [label=\"" << dot_escape(to_string(nodes[i])) << "\"" << (root ? ", penwidth=2" : "") << "];\n";
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (dist[i] >= depth) continue;
    for (const auto& t : sys.lts->transitions(nodes[i])) {
      auto it = std::find(nodes.begin(), nodes.end(), t.target);
      if (it == nodes.end()) continue;
      g << "  n" << i << " -> n" << (it - nodes.begin()) << " [label=\"" << dot_escape(std::string(t.action.str())) << "\""
        << (t.framed ? ", style=dashed, color=red" : "") << "];\n";
    }
  }
  g << "}\n";
  if (dot.empty()) {
    std::cout << g.str();
  } else {
    write_file(dot, g.str());
    std::cout << "wrote " << dot << " (" << nodes.size() << " nodes" << (truncated ? ", truncated" : "") << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------- check-normed

int cmd_check_normed(const std::string& system, const std::string& manifest, int reach, int norm, std::size_t limit,
                     const std::string& bottom, bool json, const std::string& left, const std::string& right) {
  const Loaded sys = load_system(system, manifest);
  std::vector<std::pair<std::string, pds::Configuration>> roots;
  if (!left.empty() || !right.empty() || sys.starts.size() >= 2) {
    const auto pos = start_position(sys, left, right);
    roots = {{"left", pos.left}, {"right", pos.right}};
  } else if (!sys.starts.empty()) {
    roots = {{"left", sys.starts[0]}};
  } else {
    throw MalformedInput("no start configuration to check");
  }
  pds::NormOptions opts;
  opts.reach_limit = reach;
  opts.norm_limit = norm;
  opts.size_limit = limit;
  if (!bottom.empty()) opts.bottom_as_empty = pds::StackSymbol::of(bottom);

  Json report;
  auto& starts = report["starts"] = Json::array();
  pds::NormKind overall = pds::NormKind::normed_to_limit;
  for (const auto& [side, c] : roots) {
    const auto v = pds::normedness_check(*sys.lts, c, opts);
    if (v.kind == pds::NormKind::not_normed || (v.kind == pds::NormKind::unknown && overall == pds::NormKind::normed_to_limit)) {
      overall = v.kind;
    }
    Json s{{"side", side}, {"start", to_string(c)}, {"verdict", to_string(v.kind)}, {"checked", v.checked}};
    s["witness"] = v.witness ? Json(to_string(*v.witness)) : Json(nullptr);
    s["reason"] = v.reason;
    starts.push_back(std::move(s));
  }
  report["verdict"] = to_string(overall);
  report["reach"] = reach;
  report["norm"] = norm;
  if (json) {
    std::cout << report.dump(2) << "\n";
  } else {
    for (const auto& s : starts) {
      std::cout << s["side"].get<std::string>() << " " << s["start"].get<std::string>() << ": " << s["verdict"].get<std::string>();
      if (!s["witness"].is_null()) std::cout << " witness " << s["witness"].get<std::string>();
      if (!s["reason"].get<std::string>().empty()) std::cout << " (" << s["reason"].get<std::string>() << ")";
      std::cout << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bisimlab: pushdown bisimulation games and inf-PCP reductions"};
  app.require_subcommand(1);

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "compile a PCP instance into a pushdown system");
  reduce->add_option("instance", ra.instance, "instance file, one '<u> <v>' pair per line")->required();
  reduce->add_option("--order", ra.order, "1 or 2")->check(CLI::IsMember({1, 2}));
  reduce->add_option("--style", ra.style, "first-order switch encoding: eps or schema")->check(CLI::IsMember({"eps", "schema"}));
  reduce->add_flag("--normed", ra.normed, "add the normedness rules");
  reduce->add_option("-o,--output", ra.out, "PDS output file (stdout when omitted)");
  reduce->add_option("--manifest", ra.manifest, "manifest path (default <output stem>.manifest.json)");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "bounded bisimulation game from the start pair");
  solve->add_option("system", sa.system, "PDS file")->required();
  solve->add_option("--manifest", sa.manifest, "reduction manifest (default <stem>.manifest.json if present)");
  solve->add_option("--depth", sa.depth, "rounds")->check(CLI::PositiveNumber);
  solve->add_flag("--no-eq-shortcut", sa.no_eq, "do not treat equal pairs as Defender wins");
  solve->add_flag("--json", sa.json, "JSON report");
  solve->add_flag("--parallel", sa.parallel, "parallel root fan-out");
  solve->add_option("--left", sa.left, "left start, e.g. 'q0 I1 ⊥'");
  solve->add_option("--right", sa.right, "right start");
  solve->add_option("--certificate", sa.certificate, "certificate output (default <stem>.cert.json)");
  solve->add_option("--memo-cap", sa.memo_cap, "memo entry budget")->check(CLI::PositiveNumber);

  PlayArgs pa;
  auto* play = app.add_subcommand("play", "play interactively over stdin/stdout (JSON lines)");
  play->add_option("system", pa.system, "PDS file");
  play->add_option("--manifest", pa.manifest, "reduction manifest");
  play->add_option("--instance", pa.instance, "built-in instance E1, E2 or E3 instead of a file");
  play->add_option("--order", pa.order)->check(CLI::IsMember({1, 2}));
  play->add_option("--style", pa.style)->check(CLI::IsMember({"eps", "schema"}));
  play->add_flag("--normed", pa.normed);
  play->add_option("--role", pa.role, "your role")->check(CLI::IsMember({"attacker", "defender"}));
  play->add_option("--opponent", pa.opponent, "forcing, switch, random, search:K");
  play->add_option("--oracle", pa.oracle, "solution oracle 'prefix;period' for forcing");
  play->add_option("--seed", pa.seed);
  play->add_option("--max-rounds", pa.max_rounds)->check(CLI::PositiveNumber);
  play->add_option("--left", pa.left);
  play->add_option("--right", pa.right);

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "HTTP session service");
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(1, 65535));

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "agent against agent");
  sim->add_option("system", ma.system, "PDS file")->required();
  sim->add_option("--manifest", ma.manifest);
  sim->add_option("--attacker", ma.attacker, "switch, random, search:K, search-random:K");
  sim->add_option("--defender", ma.defender, "forcing, random, search:K");
  sim->add_option("--oracle", ma.oracle);
  sim->add_option("--seed", ma.seed);
  sim->add_option("--runs", ma.runs)->check(CLI::PositiveNumber);
  sim->add_option("--rounds", ma.rounds)->check(CLI::PositiveNumber);
  sim->add_flag("--json", ma.json);
  sim->add_flag("--transcript", ma.transcript);
  sim->add_option("--left", ma.left);
  sim->add_option("--right", ma.right);

  std::string ex_system, ex_manifest, ex_dot, ex_left, ex_right;
  int ex_depth = 2;
  std::size_t ex_limit = 5000;
  auto* exp = app.add_subcommand("export", "DOT graph of the bounded collapsed LTS");
  exp->add_option("system", ex_system)->required();
  exp->add_option("--manifest", ex_manifest);
  exp->add_option("--depth", ex_depth)->check(CLI::PositiveNumber);
  exp->add_option("--limit", ex_limit, "node budget")->check(CLI::PositiveNumber);
  exp->add_option("--dot", ex_dot, "output file (stdout when omitted)");
  exp->add_option("--left", ex_left);
  exp->add_option("--right", ex_right);

  std::string cn_system, cn_manifest, cn_bottom, cn_left, cn_right;
  int cn_reach = 8, cn_norm = 64;
  std::size_t cn_limit = 200000;
  bool cn_json = false;
  auto* cn = app.add_subcommand("check-normed", "bounded normedness check");
  cn->add_option("system", cn_system)->required();
  cn->add_option("--manifest", cn_manifest);
  cn->add_option("--reach", cn_reach)->check(CLI::PositiveNumber);
  cn->add_option("--norm", cn_norm)->check(CLI::PositiveNumber);
  cn->add_option("--limit", cn_limit)->check(CLI::PositiveNumber);
  cn->add_option("--bottom-empty", cn_bottom, "treat a lone [<symbol>] stack as empty");
  cn->add_flag("--json", cn_json);
  cn->add_option("--left", cn_left);
  cn->add_option("--right", cn_right);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*reduce) return cmd_reduce(ra);
    if (*solve) return cmd_solve(sa);
    if (*play) return cmd_play(pa);
    if (*serve) return cmd_serve(host, port);
    if (*sim) return cmd_simulate(ma);
    if (*exp) return cmd_export(ex_system, ex_manifest, ex_depth, ex_limit, ex_dot, ex_left, ex_right);
    if (*cn) {
      return cmd_check_normed(cn_system, cn_manifest, cn_reach, cn_norm, cn_limit, cn_bottom, cn_json, cn_left, cn_right);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
