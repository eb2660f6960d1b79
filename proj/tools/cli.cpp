#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sigflow/circuits.hpp"
#include "sigflow/cover.hpp"
#include "sigflow/decompose.hpp"
#include "sigflow/errors.hpp"
#include "sigflow/flow.hpp"
#include "sigflow/io.hpp"
#include "sigflow/random.hpp"
#include "sigflow/search.hpp"

namespace sigflow {

namespace {

enum Exit : int { kOk = 0, kFalse = 1, kError = 2 };

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot open " + path);
    buf << file.rdbuf();
  }
  return buf.str();
}

FlowAssignment integer_flow_of(const Instance& inst) {
  if (!inst.flow) throw InvalidArgument("instance has no flow section");
  require_integer_flow(*inst.flow);
  return *inst.flow;
}

std::string bool_json(const char* key, bool value) {
  nlohmann::json j;
  j[key] = value;
  return j.dump(2) + "\n";
}

struct SelftestTally {
  std::int64_t graphs = 0;
  std::int64_t admissible = 0;
  std::int64_t equivalence_failures = 0;
  std::int64_t decomposition_failures = 0;
  std::int64_t guard_hits = 0;
  std::int64_t bound_failures = 0;
  std::int64_t cover_flow_failures = 0;
  std::int64_t exact_cover_failures = 0;

  bool passed() const {
    return equivalence_failures == 0 && decomposition_failures == 0 && guard_hits == 0 &&
           bound_failures == 0 && cover_flow_failures == 0 && exact_cover_failures == 0;
  }
};

void selftest_graph(const SignedGraph& g, SelftestTally& t) {
  ++t.graphs;
  const bool admissible = is_flow_admissible(g);
  const auto k = flow_number(g);
  if (admissible) ++t.admissible;
  if (admissible != k.has_value()) ++t.equivalence_failures;
  if (!k) return;

  const FlowAssignment f = *find_nowhere_zero_k_flow(g, *k);
  EngineReport report;
  const Decomposition d = decompose(g, f, {}, &report);
  t.guard_hits += report.guard_hits;
  if (!verify_decomposition(g, f, d)) {
    ++t.decomposition_failures;
    return;
  }
  const DerivedCover derived = cover_from_decomposition(d, g);
  if (!derived.complete() || !check_multiplicity_bound(derived.cover, f) ||
      !check_length_bound(derived.cover, g, *k)) {
    ++t.bound_failures;
  }
  if (derived.complete() && derived.cover.circuits.size() <= 30) {
    const FlowAssignment psi = flow_from_cover(derived.cover.circuits, g);
    if (!verify_flow(g, psi) || !psi.is_integer() || !psi.is_nowhere_zero()) {
      ++t.cover_flow_failures;
    }
  }
  if (g.edge_count() <= kDefaultExactCoverLimit) {
    if (shortest_cover_exact(g).total_length() > derived.cover.total_length()) {
      ++t.exact_cover_failures;
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Integer flows on signed graphs: decomposition into signed circuits and covers"};
  app.name("sigflow");
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Print reports as JSON");

  std::string file = "-";
  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "Instance file, '-' for stdin")->capture_default_str();
  };

  auto* verify = app.add_subcommand("verify", "Check that the instance's flow satisfies Kirchhoff's law");
  add_file(verify);

  bool trace = false;
  auto* decomp = app.add_subcommand("decompose", "Decompose the instance's integer flow into signed circuits");
  decomp->add_flag("--trace", trace, "Print one '#' line per extracted term");
  add_file(decomp);

  bool exact = false;
  auto* cover = app.add_subcommand("cover", "Signed circuit cover from a decomposition");
  cover->add_flag("--exact", exact, "Compute a cover of minimum total length instead");
  add_file(cover);

  int k = 0;
  auto* find = app.add_subcommand("find-flow", "Search for a nowhere-zero k-flow");
  find->add_option("-k", k, "Flow bound k")->required()->check(CLI::Range(2, 1000));
  add_file(find);

  auto* admissible = app.add_subcommand("admissible", "Does every edge lie on a signed circuit");
  add_file(admissible);

  int max_k = SearchLimits{}.max_k;
  auto* number = app.add_subcommand("flow-number", "Smallest k with a nowhere-zero k-flow");
  number->add_option("--max-k", max_k, "Largest k tried")->capture_default_str()->check(CLI::Range(2, 1000));
  add_file(number);

  int n = 4;
  int m = 6;
  double p = 0.5;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a random signed graph");
  gen->add_option("-n", n, "Vertices")->capture_default_str();
  gen->add_option("-m", m, "Edges")->capture_default_str();
  gen->add_option("-p", p, "Probability that an edge is negative")->capture_default_str();
  gen->add_option("--seed", seed, "Generator seed")->capture_default_str();

  int max_edges = 4;
  int vertices = 4;
  auto* selftest = app.add_subcommand("selftest", "Exhaustive consistency checks on all small signed graphs");
  selftest->add_option("--max-edges", max_edges, "Largest edge count")->capture_default_str()->check(CLI::Range(0, 8));
  selftest->add_option("--vertices", vertices, "Vertex count")->capture_default_str()->check(CLI::Range(1, 6));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (verify->parsed()) {
      const Instance inst = parse_instance(read_input(file, in));
      if (!inst.flow) throw InvalidArgument("instance has no flow section");
      const bool ok = verify_flow(inst.graph, *inst.flow);
      out << (json ? bool_json("valid", ok) : std::string(ok ? "valid\n" : "invalid\n"));
      return ok ? kOk : kFalse;
    }

    if (decomp->parsed()) {
      const Instance inst = parse_instance(read_input(file, in));
      const FlowAssignment f = integer_flow_of(inst);
      if (!verify_flow(inst.graph, f)) throw InvalidArgument("flow violates Kirchhoff's law");
      EngineReport report;
      const Decomposition d = decompose(inst.graph, f, DecomposeOptions{true, trace}, &report);
      if (!verify_decomposition(inst.graph, f, d)) throw InternalError("decomposition failed to verify");
      if (json) {
        auto j = nlohmann::json::parse(decomposition_json(inst.graph, d));
        if (trace) j["trace"] = report.trace;
        out << j.dump(2) << '\n';
      } else {
        for (const auto& line : report.trace) out << "# " << line << '\n';
        out << serialize_decomposition(inst.graph, d);
      }
      return kOk;
    }

    if (cover->parsed()) {
      const Instance inst = parse_instance(read_input(file, in));
      if (exact) {
        const Cover c = shortest_cover_exact(inst.graph);
        out << (json ? cover_json(c) : serialize_cover(c));
        return kOk;
      }
      FlowAssignment f;
      if (inst.flow) {
        f = integer_flow_of(inst);
        if (!verify_flow(inst.graph, f)) throw InvalidArgument("flow violates Kirchhoff's law");
      } else {
        const auto best = flow_number(inst.graph);
        if (!best) throw NotFlowAdmissible("no nowhere-zero flow with k <= " + std::to_string(SearchLimits{}.max_k));
        f = *find_nowhere_zero_k_flow(inst.graph, *best);
      }
      const DerivedCover dc = cover_from_decomposition(decompose(inst.graph, f), inst.graph);
      out << (json ? cover_json(dc.cover, dc.uncovered) : serialize_cover(dc.cover, dc.uncovered));
      return dc.complete() ? kOk : kFalse;
    }

    if (find->parsed()) {
      const Instance inst = parse_instance(read_input(file, in));
      const auto f = find_nowhere_zero_k_flow(inst.graph, k);
      if (json) {
        out << (f ? instance_json(inst.graph, &*f) : bool_json("found", false));
      } else {
        out << (f ? serialize_instance(inst.graph, &*f) : std::string("none\n"));
      }
      return f ? kOk : kFalse;
    }

    if (admissible->parsed()) {
      const Instance inst = parse_instance(read_input(file, in));
      const bool ok = is_flow_admissible(inst.graph);
      out << (json ? bool_json("admissible", ok) : std::string(ok ? "true\n" : "false\n"));
      return ok ? kOk : kFalse;
    }

    if (number->parsed()) {
      const Instance inst = parse_instance(read_input(file, in));
      SearchLimits limits;
      limits.max_k = max_k;
      const auto best = flow_number(inst.graph, limits);
      if (json) {
        nlohmann::json j;
        j["flow_number"] = best ? nlohmann::json(*best) : nlohmann::json(nullptr);
        out << j.dump(2) << '\n';
      } else {
        out << (best ? std::to_string(*best) : std::string("none")) << '\n';
      }
      return best ? kOk : kFalse;
    }

    if (gen->parsed()) {
      const SignedGraph g = generate_random(n, m, p, seed);
      out << (json ? instance_json(g) : serialize_instance(g));
      return kOk;
    }

    if (selftest->parsed()) {
      SelftestTally t;
      for_each_small_graph(vertices, max_edges, [&](const SignedGraph& g) { selftest_graph(g, t); });
      if (json) {
        nlohmann::json j;
        j["graphs"] = t.graphs;
        j["admissible"] = t.admissible;
        j["equivalence_failures"] = t.equivalence_failures;
        j["decomposition_failures"] = t.decomposition_failures;
        j["guard_hits"] = t.guard_hits;
        j["bound_failures"] = t.bound_failures;
        j["cover_flow_failures"] = t.cover_flow_failures;
        j["exact_cover_failures"] = t.exact_cover_failures;
        j["passed"] = t.passed();
        out << j.dump(2) << '\n';
      } else {
        out << "graphs " << t.graphs << '\n'
            << "admissible " << t.admissible << '\n'
            << "equivalence_failures " << t.equivalence_failures << '\n'
            << "decomposition_failures " << t.decomposition_failures << '\n'
            << "guard_hits " << t.guard_hits << '\n'
            << "bound_failures " << t.bound_failures << '\n'
            << "cover_flow_failures " << t.cover_flow_failures << '\n'
            << "exact_cover_failures " << t.exact_cover_failures << '\n'
            << (t.passed() ? "passed" : "FAILED") << '\n';
      }
      return t.passed() ? kOk : kFalse;
    }
  } catch (const std::exception& e) {
    err << "sigflow: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace sigflow
