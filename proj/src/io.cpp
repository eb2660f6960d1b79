#include "sigflow/io.hpp"

#include <charconv>
#include <json.hpp>
#include <sstream>

namespace sigflow {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string_view> fields;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      if (j > i) line.fields.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.fields.empty()) out.push_back(std::move(line));
  }
  return out;
}

template <typename T>
T number_field(const Line& line, std::size_t i, const char* what) {
  if (i >= line.fields.size()) throw ParseError(line.number, std::string("missing ") + what);
  T value{};
  const auto f = line.fields[i];
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    throw ParseError(line.number, std::string("bad ") + what + " '" + std::string(f) + "'");
  }
  return value;
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.fields.size() != n) {
    throw ParseError(line.number, "expected " + std::to_string(n) + " fields, got " +
                                      std::to_string(line.fields.size()));
  }
}

std::string dart_list(const Bidirection& w, const std::vector<Dart>& darts) {
  std::string out;
  for (const Dart d : darts) {
    if (!out.empty()) out += ' ';
    out += std::to_string(d.edge) + ":" + std::to_string(w.bit(d.edge));
  }
  return out;
}

std::string edge_list(const std::vector<Dart>& darts) {
  std::string out;
  for (const Dart d : darts) {
    if (!out.empty()) out += ' ';
    out += std::to_string(d.edge);
  }
  return out;
}

nlohmann::json dart_json(const Bidirection& w, const std::vector<Dart>& darts) {
  auto arr = nlohmann::json::array();
  for (const Dart d : darts) arr.push_back({{"edge", d.edge}, {"bit", w.bit(d.edge)}});
  return arr;
}

nlohmann::json edges_json(const std::vector<Dart>& darts) {
  auto arr = nlohmann::json::array();
  for (const Dart d : darts) arr.push_back(d.edge);
  return arr;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty input, expected 'sg <n> <m>'");
  const Line& header = lines.front();
  if (header.fields[0] != "sg") throw ParseError(header.number, "expected 'sg <n> <m>' header");
  expect_arity(header, 3);
  const int n = number_field<int>(header, 1, "vertex count");
  const int m = number_field<int>(header, 2, "edge count");
  if (n < 0 || m < 0) throw ParseError(header.number, "negative count");

  std::vector<std::optional<Edge>> edges(static_cast<std::size_t>(m));
  std::size_t at = 1;
  for (int k = 0; k < m; ++k, ++at) {
    if (at >= lines.size()) {
      throw ParseError(lines.back().number, "expected " + std::to_string(m) + " edge lines");
    }
    const Line& line = lines[at];
    if (line.fields[0] != "e") throw ParseError(line.number, "expected 'e <id> <u> <v> <+|->'");
    expect_arity(line, 5);
    const int id = number_field<int>(line, 1, "edge id");
    const int u = number_field<int>(line, 2, "vertex id");
    const int v = number_field<int>(line, 3, "vertex id");
    if (id < 0 || id >= m) throw ParseError(line.number, "edge id out of range");
    if (u < 0 || u >= n || v < 0 || v >= n) throw ParseError(line.number, "dangling vertex id");
    if (edges[static_cast<std::size_t>(id)]) throw ParseError(line.number, "duplicate edge id");
    const auto s = line.fields[4];
    if (s != "+" && s != "-") throw ParseError(line.number, "sign must be '+' or '-'");
    edges[static_cast<std::size_t>(id)] = Edge{{u, v}, s == "+" ? Sign::positive : Sign::negative};
  }

  Instance inst{SignedGraph(n), std::nullopt};
  for (const auto& e : edges) inst.graph.add_edge(e->ends[0], e->ends[1], e->sign);
  if (at == lines.size()) return inst;

  const Line& sentinel = lines[at++];
  if (sentinel.fields[0] != "flow") throw ParseError(sentinel.number, "expected 'flow' or end of input");
  expect_arity(sentinel, 1);
  std::vector<std::optional<std::pair<std::int64_t, std::uint8_t>>> values(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k, ++at) {
    if (at >= lines.size()) {
      throw ParseError(lines.back().number, "expected " + std::to_string(m) + " flow lines");
    }
    const Line& line = lines[at];
    if (line.fields[0] != "f") throw ParseError(line.number, "expected 'f <id> <doubled> <bit>'");
    expect_arity(line, 4);
    const int id = number_field<int>(line, 1, "edge id");
    const auto doubled = number_field<std::int64_t>(line, 2, "doubled value");
    const int bit = number_field<int>(line, 3, "orientation bit");
    if (id < 0 || id >= m) throw ParseError(line.number, "edge id out of range");
    if (bit != 0 && bit != 1) throw ParseError(line.number, "orientation bit must be 0 or 1");
    if (values[static_cast<std::size_t>(id)]) throw ParseError(line.number, "duplicate edge id");
    values[static_cast<std::size_t>(id)] = {{doubled, static_cast<std::uint8_t>(bit)}};
  }
  if (at != lines.size()) throw ParseError(lines[at].number, "trailing records after flow");

  std::vector<std::uint8_t> bits;
  std::vector<HalfInt> vals;
  for (const auto& v : values) {
    bits.push_back(v->second);
    vals.push_back(HalfInt::from_doubled(v->first));
  }
  inst.flow = FlowAssignment{Bidirection::from_bits(inst.graph, bits), std::move(vals)};
  return inst;
}

std::string serialize_instance(const SignedGraph& g, const FlowAssignment* flow) {
  std::ostringstream os;
  os << "sg " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    os << "e " << e << ' ' << ed.ends[0] << ' ' << ed.ends[1] << ' ' << sign_char(ed.sign) << '\n';
  }
  if (flow) {
    if (flow->size() != static_cast<std::size_t>(g.edge_count())) {
      throw InvalidArgument("serialize_instance: flow size mismatch");
    }
    os << "flow\n";
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      os << "f " << e << ' ' << (*flow)[e].doubled() << ' ' << flow->orientation.bit(e) << '\n';
    }
  }
  return os.str();
}

std::string instance_json(const SignedGraph& g, const FlowAssignment* flow) {
  nlohmann::json out;
  out["sg"] = {{"n", g.vertex_count()}, {"m", g.edge_count()}};
  auto edges = nlohmann::json::array();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    edges.push_back({{"id", e}, {"u", ed.ends[0]}, {"v", ed.ends[1]},
                     {"sign", std::string(1, sign_char(ed.sign))}});
  }
  out["e"] = std::move(edges);
  if (flow) {
    auto values = nlohmann::json::array();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      values.push_back({{"id", e}, {"doubled", (*flow)[e].doubled()}, {"bit", flow->orientation.bit(e)}});
    }
    out["flow"] = std::move(values);
  }
  return out.dump(2) + "\n";
}

void require_integer_flow(const FlowAssignment& f) {
  for (EdgeId e = 0; e < static_cast<EdgeId>(f.size()); ++e) {
    if (!f[e].is_integer()) {
      throw InvalidArgument("edge " + std::to_string(e) + " has odd doubled value " +
                            std::to_string(f[e].doubled()) + "; an integer flow is required");
    }
  }
}

std::string serialize_decomposition(const SignedGraph& g, const Decomposition& d) {
  (void)g;
  std::ostringstream os;
  os << "decomp " << d.terms.size() << '\n';
  for (const Term& t : d.terms) {
    const SignedCircuit& c = t.circuit.circuit;
    if (c.is_balanced()) {
      os << "B " << t.coefficient << ' ' << dart_list(d.orientation, c.cycle) << '\n';
    } else {
      const std::string path = dart_list(d.orientation, c.path);
      os << "U " << t.coefficient << ' ' << dart_list(d.orientation, c.cycle) << " |"
         << (path.empty() ? "" : " " + path) << " | " << dart_list(d.orientation, c.second)
         << '\n';
    }
  }
  return os.str();
}

Decomposition parse_decomposition(const SignedGraph& g, std::string_view text,
                                  const Bidirection& fallback) {
  const auto lines = tokenize(text);
  if (lines.empty() || lines[0].fields[0] != "decomp") {
    throw ParseError(lines.empty() ? 1 : lines[0].number, "expected 'decomp <terms>' header");
  }
  expect_arity(lines[0], 2);
  const auto count = number_field<std::size_t>(lines[0], 1, "term count");
  if (lines.size() != count + 1) {
    throw ParseError(lines.back().number, "term count does not match header");
  }
  if (fallback.edge_count() != static_cast<std::size_t>(g.edge_count())) {
    throw InvalidArgument("parse_decomposition: fallback orientation size mismatch");
  }

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.edge_count()));
  std::vector<std::uint8_t> fixed(bits.size(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) bits[static_cast<std::size_t>(e)] = fallback.bit(e);

  struct Raw {
    bool balanced;
    std::int64_t coeff;
    std::vector<std::vector<EdgeId>> parts;
  };
  std::vector<Raw> raws;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto kind = line.fields[0];
    if (kind != "B" && kind != "U") throw ParseError(line.number, "term kind must be B or U");
    Raw raw{kind == "B", number_field<std::int64_t>(line, 1, "coefficient"), {{}}};
    for (std::size_t f = 2; f < line.fields.size(); ++f) {
      const auto tok = line.fields[f];
      if (tok == "|") {
        raw.parts.emplace_back();
        continue;
      }
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) throw ParseError(line.number, "expected <edge:bit>");
      int e = 0;
      int b = 0;
      const auto r1 = std::from_chars(tok.data(), tok.data() + colon, e);
      const auto r2 = std::from_chars(tok.data() + colon + 1, tok.data() + tok.size(), b);
      if (r1.ec != std::errc{} || r2.ec != std::errc{} || r2.ptr != tok.data() + tok.size() ||
          r1.ptr != tok.data() + colon) {
        throw ParseError(line.number, "bad <edge:bit> '" + std::string(tok) + "'");
      }
      if (!g.has_edge(e) || (b != 0 && b != 1)) throw ParseError(line.number, "edge or bit out of range");
      const auto ei = static_cast<std::size_t>(e);
      if (fixed[ei] && bits[ei] != b) throw ParseError(line.number, "conflicting orientation bits");
      fixed[ei] = 1;
      bits[ei] = static_cast<std::uint8_t>(b);
      raw.parts.back().push_back(e);
    }
    if (raw.parts.size() != (raw.balanced ? 1u : 3u)) {
      throw ParseError(line.number, raw.balanced ? "B term takes one edge list"
                                                 : "U term takes three '|'-separated lists");
    }
    raws.push_back(std::move(raw));
  }

  Decomposition d{Bidirection::from_bits(g, bits), {}};
  for (std::size_t i = 0; i < raws.size(); ++i) {
    const Raw& raw = raws[i];
    SignedCircuit c;
    try {
      c = raw.balanced ? balanced_from_edges(g, raw.parts[0])
                       : bicircuit_from_edges(g, raw.parts[0], raw.parts[1], raw.parts[2]);
    } catch (const InvalidArgument& err) {
      throw ParseError(lines[i + 1].number, err.what());
    }
    auto verdict = check_consistent(g, d.orientation, c);
    if (!verdict.ok) throw ParseError(lines[i + 1].number, "term is not consistently directed");
    if (raw.coeff <= 0) throw ParseError(lines[i + 1].number, "coefficient must be positive");
    d.terms.push_back(Term{ConsistentlyOriented{std::move(c), d.orientation, verdict.faulty}, raw.coeff});
  }
  return d;
}

std::string decomposition_json(const SignedGraph& g, const Decomposition& d) {
  nlohmann::json out;
  out["decomp"] = d.terms.size();
  auto bits = nlohmann::json::array();
  for (EdgeId e = 0; e < g.edge_count(); ++e) bits.push_back(d.orientation.bit(e));
  out["orientation"] = bits;
  auto terms = nlohmann::json::array();
  for (const Term& t : d.terms) {
    const SignedCircuit& c = t.circuit.circuit;
    nlohmann::json j;
    j["kind"] = c.is_balanced() ? "B" : "U";
    j["coeff"] = t.coefficient;
    j["circuit1"] = dart_json(d.orientation, c.cycle);
    if (!c.is_balanced()) {
      j["path"] = dart_json(d.orientation, c.path);
      j["circuit2"] = dart_json(d.orientation, c.second);
    }
    terms.push_back(std::move(j));
  }
  out["terms"] = std::move(terms);
  return out.dump(2) + "\n";
}

std::string circuit_line(const SignedCircuit& c) {
  if (c.is_balanced()) return "B " + edge_list(c.cycle);
  const std::string path = edge_list(c.path);
  return "U " + edge_list(c.cycle) + " |" + (path.empty() ? "" : " " + path) + " | " +
         edge_list(c.second);
}

std::string serialize_cover(const Cover& cover, const std::vector<EdgeId>& uncovered) {
  std::ostringstream os;
  os << "cover " << cover.circuits.size() << ' ' << cover.total_length() << '\n';
  for (const auto& c : cover.circuits) os << circuit_line(c) << '\n';
  os << "mult";
  for (const int m : cover.multiplicity) os << ' ' << m;
  os << '\n';
  if (!uncovered.empty()) {
    os << "uncovered";
    for (const EdgeId e : uncovered) os << ' ' << e;
    os << '\n';
  }
  return os.str();
}

std::string cover_json(const Cover& cover, const std::vector<EdgeId>& uncovered) {
  nlohmann::json out;
  out["cover"] = cover.circuits.size();
  out["length"] = cover.total_length();
  auto circuits = nlohmann::json::array();
  for (const auto& c : cover.circuits) {
    nlohmann::json j;
    j["kind"] = c.is_balanced() ? "B" : "U";
    j["circuit1"] = edges_json(c.cycle);
    if (!c.is_balanced()) {
      j["path"] = edges_json(c.path);
      j["circuit2"] = edges_json(c.second);
    }
    circuits.push_back(std::move(j));
  }
  out["circuits"] = std::move(circuits);
  out["mult"] = cover.multiplicity;
  out["uncovered"] = uncovered;
  return out.dump(2) + "\n";
}

}  // namespace sigflow
