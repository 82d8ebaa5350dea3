#include "bisimlab/pcp/reduction.hpp"

#include <algorithm>

#include "bisimlab/error.hpp"

namespace bisimlab::pcp {

using pds::Action;
using pds::Configuration;
using pds::ControlState;
using pds::PdsBuilder;
using pds::Rule;
using pds::Stack;
using pds::StackSymbol;

std::string to_string(FirstOrderStyle s) { return s == FirstOrderStyle::epsilon_family ? "eps" : "schema"; }

FirstOrderStyle parse_style(const std::string& s) {
  if (s == "eps") return FirstOrderStyle::epsilon_family;
  if (s == "schema") return FirstOrderStyle::direct_schema;
  throw ValidationError("unknown style '" + s + "' (expected eps or schema)");
}

ReductionNames ReductionNames::for_size(std::size_t n) {
  ReductionNames nm;
  auto cs = [](const char* s) { return ControlState::of(s); };
  nm.q0 = cs("q0");
  nm.q0p = cs("q0'");
  nm.t = cs("t");
  nm.q_u = cs("q_u");
  nm.q_v = cs("q_v");
  nm.z = cs("z");
  nm.r = cs("r");
  nm.rp = cs("r'");
  nm.q = cs("q");
  nm.qp = cs("q'");
  nm.qpp = cs("q''");
  nm.p = cs("p");
  nm.pp = cs("p'");
  nm.q_pop = cs("q_pop");
  for (std::size_t k = 1; k <= n; ++k) {
    const std::string i = std::to_string(k);
    nm.p_i.push_back(cs(("p" + i).c_str()));
    nm.I.push_back(StackSymbol::of("I" + i));
    nm.a_i.push_back(Action::named("a" + i));
  }
  nm.A = StackSymbol::of("A");
  nm.B = StackSymbol::of("B");
  nm.bottom = StackSymbol::of("⊥");
  nm.g = Action::named("g");
  nm.s = Action::named("s");
  nm.a = Action::named("a");
  nm.b = Action::named("b");
  nm.c = Action::named("c");
  nm.c1 = Action::named("c1");
  nm.c2 = Action::named("c2");
  nm.h = Action::named("h");
  nm.d = Action::named("d");
  nm.e = Action::named("e");
  nm.f = Action::named("f");
  return nm;
}

int ReductionNames::index_of(StackSymbol x) const {
  auto it = std::find(I.begin(), I.end(), x);
  return it == I.end() ? 0 : static_cast<int>(it - I.begin()) + 1;
}

int ReductionNames::generator_index(ControlState q) const {
  auto it = std::find(p_i.begin(), p_i.end(), q);
  return it == p_i.end() ? 0 : static_cast<int>(it - p_i.begin()) + 1;
}

int ReductionNames::action_index(Action act) const {
  auto it = std::find(a_i.begin(), a_i.end(), act);
  return it == a_i.end() ? 0 : static_cast<int>(it - a_i.begin()) + 1;
}

std::vector<StackSymbol> ReductionNames::letters(const Word& w) const {
  std::vector<StackSymbol> out;
  out.reserve(w.size());
  for (char c : w) out.push_back(letter(c));
  return out;
}

namespace {

class Assembler {
 public:
  explicit Assembler(int order) : b_(order) {}

  void add(Rule r, bool framed = false) {
    const std::size_t idx = b_.add(std::move(r));
    if (framed) framed_.push_back(idx);
  }

  PdsBuilder& builder() { return b_; }
  std::vector<std::size_t> framed() const { return framed_; }

 private:
  PdsBuilder b_;
  std::vector<std::size_t> framed_;
};

void declare_alphabets(PdsBuilder& b, const ReductionNames& nm, const std::vector<ControlState>& extra) {
  b.declare(nm.q0).declare(nm.q0p).declare(nm.t);
  for (auto p : nm.p_i) b.declare(p);
  b.declare(nm.q_u).declare(nm.q_v);
  for (auto q : extra) b.declare(q);
  for (auto x : nm.I) b.declare(x);
  b.declare(nm.A).declare(nm.B).declare(nm.bottom);
}

void add_generation(Assembler& as, const ReductionNames& nm) {
  const std::size_t n = nm.p_i.size();
  as.add(Rule::wild(nm.q0, nm.g, nm.t));
  for (std::size_t i = 0; i < n; ++i) as.add(Rule::wild(nm.q0, nm.g, nm.p_i[i]), true);
  for (std::size_t i = 0; i < n; ++i) as.add(Rule::wild(nm.q0p, nm.g, nm.p_i[i]));
  for (std::size_t i = 0; i < n; ++i) as.add(Rule::wild(nm.t, nm.a_i[i], nm.q0, {nm.I[i]}));
  for (std::size_t i = 0; i < n; ++i) as.add(Rule::wild(nm.p_i[i], nm.a_i[i], nm.q0p, {nm.I[i]}));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) as.add(Rule::wild(nm.p_i[i], nm.a_i[j], nm.q0, {nm.I[j]}), true);
    }
  }
}

void add_verification(Assembler& as, const PcpInstance& inst, const ReductionNames& nm) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Word ur = reverse(inst.pairs()[i].u);
    as.add(Rule::rewrite(nm.q_u, nm.I[i], head_action(ur), nm.q_u, nm.letters(tail(ur))));
  }
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Word vr = reverse(inst.pairs()[i].v);
    as.add(Rule::rewrite(nm.q_v, nm.I[i], head_action(vr), nm.q_v, nm.letters(tail(vr))));
  }
  as.add(Rule::rewrite(nm.q_u, nm.A, nm.a, nm.q_u));
  as.add(Rule::rewrite(nm.q_u, nm.B, nm.b, nm.q_u));
  as.add(Rule::rewrite(nm.q_v, nm.A, nm.a, nm.q_v));
  as.add(Rule::rewrite(nm.q_v, nm.B, nm.b, nm.q_v));
}

Stack start_stack(const ReductionNames& nm) { return Stack::of({nm.I[0], nm.bottom}); }

}  // namespace

ReductionOutput build_first_order(const PcpInstance& inst, const ReductionOptions& opts) {
  const ReductionNames nm = ReductionNames::for_size(inst.size());
  const bool eps = opts.style == FirstOrderStyle::epsilon_family;
  Assembler as(1);
  declare_alphabets(as.builder(), nm, eps ? std::vector<ControlState>{nm.z} : std::vector<ControlState>{});

  add_generation(as, nm);
  as.add(Rule::wild(nm.q0, nm.s, nm.q_u));
  if (eps) {
    as.add(Rule::wild(nm.q0, nm.s, nm.z), true);
    as.add(Rule::wild(nm.q0p, nm.s, nm.z));
    for (std::size_t i = 0; i < inst.size(); ++i) as.add(Rule::rewrite(nm.z, nm.I[i], Action::epsilon(), nm.z));
    for (std::size_t i = 0; i < inst.size(); ++i) {
      for (const Word& w : suffixes(reverse(inst.pairs()[i].v))) {
        as.add(Rule::rewrite(nm.z, nm.I[i], Action::epsilon(), nm.q_v, nm.letters(w)));
      }
    }
  }
  add_verification(as, inst, nm);
  if (opts.normed) {
    as.add(Rule::rewrite(nm.q_u, nm.bottom, nm.e, nm.q_u));
    as.add(Rule::rewrite(nm.q_v, nm.bottom, nm.e, nm.q_v));
  }

  ReductionOutput out{inst, opts, nm, nullptr, as.framed(), {}, nullptr};
  out.options.order = 1;
  auto sys = std::make_shared<const pds::PushdownSystem>(std::move(as.builder()).build());
  out.system = sys;
  out.start = {Configuration(nm.q0, start_stack(nm)), Configuration(nm.q0p, start_stack(nm))};
  if (eps) {
    out.lts = std::make_shared<pds::CollapsedLts>(sys, out.framed_rules);
  } else {
    out.lts = std::make_shared<SchemaLts>(sys, out.framed_rules, inst);
  }
  return out;
}

ReductionOutput build_second_order(const PcpInstance& inst, const ReductionOptions& opts) {
  const ReductionNames nm = ReductionNames::for_size(inst.size());
  Assembler as(2);
  std::vector<ControlState> extra{nm.r, nm.rp, nm.q, nm.qp, nm.qpp, nm.p, nm.pp};
  if (opts.normed) extra.push_back(nm.q_pop);
  declare_alphabets(as.builder(), nm, extra);
  std::vector<StackSymbol> gamma = nm.I;
  gamma.insert(gamma.end(), {nm.A, nm.B, nm.bottom});

  add_generation(as, nm);
  for (auto x : gamma) as.add(Rule::push(nm.q0, x, nm.s, nm.r));
  for (auto x : gamma) as.add(Rule::push(nm.q0p, x, nm.s, nm.rp));
  as.add(Rule::wild(nm.r, nm.c, nm.q));
  as.add(Rule::wild(nm.rp, nm.c, nm.qp));
  as.add(Rule::wild(nm.rp, nm.c, nm.qpp));
  as.add(Rule::wild(nm.r, nm.c, nm.qp), true);
  as.add(Rule::wild(nm.r, nm.c, nm.qpp), true);
  for (auto x : nm.I) as.add(Rule::rewrite(nm.q, x, nm.c1, nm.r));
  for (auto x : nm.I) as.add(Rule::rewrite(nm.qp, x, nm.c1, nm.rp));
  for (auto x : nm.I) as.add(Rule::rewrite(nm.qpp, x, nm.c1, nm.r), true);
  as.add(Rule::wild(nm.q, nm.c2, nm.p));
  as.add(Rule::wild(nm.qpp, nm.c2, nm.pp));
  as.add(Rule::wild(nm.qp, nm.c2, nm.p), true);
  as.add(Rule::rewrite(nm.q, nm.bottom, nm.h, nm.q));
  for (auto x : gamma) as.add(Rule::pop(nm.p, x, nm.d, nm.q_u));
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (const Word& w : suffixes(reverse(inst.pairs()[i].v))) {
      as.add(Rule::rewrite(nm.p, nm.I[i], nm.d, nm.q_v, nm.letters(w)), true);
    }
  }
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (const Word& w : suffixes(reverse(inst.pairs()[i].v))) {
      as.add(Rule::rewrite(nm.pp, nm.I[i], nm.d, nm.q_v, nm.letters(w)));
    }
  }
  add_verification(as, inst, nm);
  if (opts.normed) {
    as.add(Rule::wild(nm.q_u, nm.f, nm.q_pop));
    std::vector<ControlState> controls{nm.q0, nm.q0p, nm.t};
    controls.insert(controls.end(), nm.p_i.begin(), nm.p_i.end());
    controls.push_back(nm.q_v);
    controls.insert(controls.end(), extra.begin(), extra.end());
    for (auto x : controls) {
      for (auto y : gamma) as.add(Rule::pop(x, y, nm.f, nm.q_pop));
    }
  }

  ReductionOutput out{inst, opts, nm, nullptr, as.framed(), {}, nullptr};
  out.options.order = 2;
  out.options.style = FirstOrderStyle::epsilon_family;
  auto sys = std::make_shared<const pds::PushdownSystem>(std::move(as.builder()).build());
  out.system = sys;
  if (opts.normed) {
    const Stack base = Stack::of({nm.bottom});
    out.start = {Configuration(nm.q0, {start_stack(nm), base}), Configuration(nm.q0p, {start_stack(nm), base})};
  } else {
    out.start = {Configuration(nm.q0, start_stack(nm)), Configuration(nm.q0p, start_stack(nm))};
  }
  out.lts = std::make_shared<pds::CollapsedLts>(sys, out.framed_rules);
  return out;
}

ReductionOutput build_reduction(const PcpInstance& inst, const ReductionOptions& opts) {
  if (opts.order == 1) return build_first_order(inst, opts);
  if (opts.order == 2) return build_second_order(inst, opts);
  throw ValidationError("order must be 1 or 2, got " + std::to_string(opts.order));
}

IndexSequence index_sequence(const ReductionNames& names, const Stack& s) {
  IndexSequence top_first;
  bool bottom_seen = false;
  bool ok = !s.empty();
  s.for_each([&](StackSymbol x) {
    if (!ok) return;
    if (bottom_seen) {
      ok = false;
    } else if (x == names.bottom) {
      bottom_seen = true;
    } else if (int k = names.index_of(x); k > 0) {
      top_first.push_back(k);
    } else {
      ok = false;
    }
  });
  if (!ok || !bottom_seen) throw MalformedInput("malformed stack shape " + to_string(s) + " (expected I* ⊥)");
  std::reverse(top_first.begin(), top_first.end());
  return top_first;
}

Stack index_stack(const ReductionNames& names, const IndexSequence& seq) {
  Stack s = Stack::of({names.bottom});
  for (int k : seq) {
    if (k < 1 || static_cast<std::size_t>(k) > names.I.size()) throw ValidationError("index " + std::to_string(k) + " out of range");
    s = s.push(names.I[static_cast<std::size_t>(k - 1)]);
  }
  return s;
}

std::vector<Configuration> switch_targets(const PcpInstance& inst, const Configuration& c) {
  const ReductionNames nm = ReductionNames::for_size(inst.size());
  if ((c.control() != nm.q0 && c.control() != nm.q0p) || c.stack_count() != 1) {
    throw MalformedInput("switch targets need q0 or q0' over a single stack, got " + to_string(c));
  }
  const IndexSequence seq = index_sequence(nm, c.top_stack());
  std::vector<Stack> below(seq.size() + 1);  // below[m] = I_im ... I_i1 ⊥
  below[0] = Stack::of({nm.bottom});
  for (std::size_t m = 1; m <= seq.size(); ++m) below[m] = below[m - 1].push(nm.I[static_cast<std::size_t>(seq[m - 1] - 1)]);

  std::vector<Configuration> out;
  for (std::size_t m = seq.size(); m-- > 0;) {
    const Word& v = inst.pair(seq[m]).v;
    for (const Word& w : suffixes(reverse(v))) {
      const auto syms = nm.letters(w);
      out.emplace_back(nm.q_v, below[m].push_all(syms));
    }
  }
  return out;
}

SchemaLts::SchemaLts(std::shared_ptr<const pds::PushdownSystem> sys, std::vector<std::size_t> framed, PcpInstance inst)
    : base_(std::move(sys), std::move(framed)), inst_(std::move(inst)), names_(ReductionNames::for_size(inst_.size())) {}

std::vector<pds::Transition> SchemaLts::transitions(const Configuration& c) const {
  auto out = base_.transitions(c);
  if ((c.control() == names_.q0 || c.control() == names_.q0p) && c.stack_count() == 1) {
    const bool framed = c.control() == names_.q0;
    for (auto& target : switch_targets(inst_, c)) out.push_back({names_.s, std::move(target), framed});
  }
  return out;
}

nlohmann::ordered_json manifest_json(const ReductionOutput& out) {
  nlohmann::ordered_json j;
  j["format"] = "bisimlab-reduction/1";
  auto& pairs = j["instance"] = nlohmann::ordered_json::array();
  for (const auto& p : out.instance.pairs()) pairs.push_back({p.u, p.v});
  j["order"] = out.options.order;
  j["style"] = to_string(out.options.style);
  j["normed"] = out.options.normed;
  auto& sym = j["symbols"];
  for (std::size_t k = 0; k < out.names.I.size(); ++k) sym["indices"][std::to_string(k + 1)] = std::string(out.names.I[k].str());
  sym["letters"] = {{"A", std::string(out.names.A.str())}, {"B", std::string(out.names.B.str())}};
  sym["bottom"] = std::string(out.names.bottom.str());
  auto& controls = sym["controls"] = nlohmann::ordered_json::array();
  for (auto q : out.system->controls()) controls.push_back(std::string(q.str()));
  j["framed_rules"] = out.framed_rules;
  j["start"] = {{"left", pds::to_text(out.start.left)}, {"right", pds::to_text(out.start.right)}};
  return j;
}

ReductionOutput reduction_from_manifest(const nlohmann::ordered_json& manifest, const pds::PushdownSystem* system) {
  std::vector<WordPair> pairs;
  ReductionOptions opts;
  try {
    for (const auto& p : manifest.at("instance")) pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
    opts.order = manifest.at("order").get<int>();
    opts.style = parse_style(manifest.at("style").get<std::string>());
    opts.normed = manifest.at("normed").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("manifest: ") + e.what());
  }
  ReductionOutput out = build_reduction(PcpInstance::validate(std::move(pairs)), opts);
  if (system != nullptr && !(*system == *out.system)) {
    throw ValidationError("system file does not match the reduction its manifest describes");
  }
  if (manifest.contains("framed_rules") && manifest["framed_rules"].get<std::vector<std::size_t>>() != out.framed_rules) {
    throw ValidationError("manifest framed rules do not match the rebuilt reduction");
  }
  return out;
}

}  // namespace bisimlab::pcp
