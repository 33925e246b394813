#include "bhk/io.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace bhk {

ParseError::ParseError(std::size_t line, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason),
      line_(line) {}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line.substr(0, line.find('#')));
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  return tokens;
}

struct Declaration {
  std::size_t line;
  std::vector<std::string> tokens;
};

void expect_arity(const Declaration& d, std::size_t n) {
  if (d.tokens.size() != n) {
    throw ParseError(d.line, "'" + d.tokens[0] + "' takes " +
                                 std::to_string(n - 1) + " arguments, got " +
                                 std::to_string(d.tokens.size() - 1));
  }
}

void expect_id(const Declaration& d, const std::string& id) {
  if (!is_valid_user_id(id)) {
    throw ParseError(d.line, "invalid id '" + id +
                                 "' (ids may not contain '@', '/', '~')");
  }
}

}  // namespace

Presentation parse_graph(std::istream& in) {
  std::vector<Declaration> decls;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto tokens = tokens_of(line);
    if (!tokens.empty()) decls.push_back({line_no, std::move(tokens)});
  }

  Presentation p;
  std::map<std::string, std::size_t> attachment_lines;
  // Vertices first so edges may refer to vertices declared further down.
  for (const auto& d : decls) {
    if (d.tokens[0] != "V") continue;
    expect_arity(d, 2);
    expect_id(d, d.tokens[1]);
    if (p.core.has_vertex(d.tokens[1])) {
      throw ParseError(d.line, "duplicate vertex '" + d.tokens[1] + "'");
    }
    p.core.add_vertex(d.tokens[1]);
  }
  auto known_vertex = [&p](const Declaration& d, const std::string& v) {
    if (!p.core.has_vertex(v)) throw ParseError(d.line, "unknown vertex '" + v + "'");
  };
  auto new_attachment = [&](const Declaration& d, const std::string& id) {
    expect_id(d, id);
    if (!attachment_lines.emplace(id, d.line).second) {
      throw ParseError(d.line, "duplicate attachment id '" + id + "'");
    }
  };

  for (const auto& d : decls) {
    const std::string& kind = d.tokens[0];
    if (kind == "V") continue;
    if (kind == "E") {
      expect_arity(d, 4);
      expect_id(d, d.tokens[1]);
      known_vertex(d, d.tokens[2]);
      known_vertex(d, d.tokens[3]);
      if (p.core.find_edge(d.tokens[1])) {
        throw ParseError(d.line, "duplicate edge '" + d.tokens[1] + "'");
      }
      p.core.add_edge(d.tokens[1], d.tokens[2], d.tokens[3]);
    } else if (kind == "R") {
      expect_arity(d, 3);
      new_attachment(d, d.tokens[1]);
      known_vertex(d, d.tokens[2]);
      p.rays.push_back({d.tokens[1], d.tokens[2]});
    } else if (kind == "T") {
      expect_arity(d, 4);
      new_attachment(d, d.tokens[1]);
      known_vertex(d, d.tokens[2]);
      unsigned long b = 0;
      std::size_t used = 0;
      try {
        b = std::stoul(d.tokens[3], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != d.tokens[3].size() || b < 2 ||
          b > std::numeric_limits<unsigned>::max()) {
        throw ParseError(d.line, "tree branching must be an integer >= 2, got '" +
                                     d.tokens[3] + "'");
      }
      p.trees.push_back({d.tokens[1], d.tokens[2], static_cast<unsigned>(b)});
    } else {
      throw ParseError(d.line, "unknown declaration '" + kind + "'");
    }
  }
  if (p.core.vertex_count() == 0) throw ParseError(line_no, "graph has no vertices");
  return p;
}

Presentation load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_graph(in);
}

std::string format_graph(const Presentation& p) {
  std::ostringstream out;
  for (const auto& v : p.core.vertices()) out << "V " << v << '\n';
  for (const auto& [id, e] : p.core.edges())
    out << "E " << id << ' ' << e.u << ' ' << e.v << '\n';
  for (const auto& r : p.rays) out << "R " << r.id << ' ' << r.vertex << '\n';
  for (const auto& t : p.trees)
    out << "T " << t.id << ' ' << t.vertex << ' ' << t.branching << '\n';
  return out.str();
}

IntMatrix parse_matrix(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(tokens_of(line));

  std::size_t i = 0;
  while (i < lines.size() && lines[i].empty()) ++i;
  if (i == lines.size()) throw ParseError(lines.size(), "missing 'rows cols' header");
  auto parse_size = [](std::size_t line, const std::string& s) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s[0] == '-') {
      throw ParseError(line, "bad dimension '" + s + "'");
    }
    return static_cast<std::size_t>(v);
  };
  if (lines[i].size() != 2) throw ParseError(i + 1, "header must be 'rows cols'");
  const std::size_t rows = parse_size(i + 1, lines[i][0]);
  const std::size_t cols = parse_size(i + 1, lines[i][1]);

  IntMatrix m(rows, cols);
  std::size_t r = 0;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (r == rows) throw ParseError(i + 1, "more rows than declared");
    if (lines[i].size() != cols) {
      throw ParseError(i + 1, "expected " + std::to_string(cols) + " entries, got " +
                                  std::to_string(lines[i].size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (m(r, c).set_str(lines[i][c], 10) != 0) {
        throw ParseError(i + 1, "not an integer: '" + lines[i][c] + "'");
      }
    }
    ++r;
  }
  if (r != rows) {
    throw ParseError(lines.size(), "expected " + std::to_string(rows) +
                                       " rows, got " + std::to_string(r));
  }
  return m;
}

IntMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_matrix(in);
}

Json to_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Json to_json(const AbelianGroup& g) {
  Json j;
  if (g.free_rank.is_omega()) {
    j["free_rank"] = "omega";
  } else {
    j["free_rank"] = g.free_rank.value();
  }
  j["torsion"] = Json::array();
  for (const auto& t : g.torsion) j["torsion"].push_back(to_json(t));
  return j;
}

Json to_json(const EdgeChain& chain) {
  Json j = Json::object();
  for (const auto& [edge, coef] : chain) j[edge] = to_json(coef);
  return j;
}

Json to_json(const LimitTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    Json images = Json::array();
    for (const auto& probe : s.images)
      images.push_back({{"offset", probe.offset}, {"image", to_json(probe.image)}});
    steps.push_back({{"step", s.index},
                     {"omega_size", s.omega_size},
                     {"generators", s.generators},
                     {"black_relations", s.black_relations},
                     {"group", to_json(s.group)},
                     {"images", std::move(images)},
                     {"image_settled", s.image_settled},
                     {"image_rank", s.stable_image().free_rank.value()}});
  }
  Json j;
  j["verdict"] = to_string(trace.verdict);
  j["value"] = trace.value ? to_json(*trace.value) : Json(nullptr);
  j["at_step"] = trace.verdict == Verdict::stabilized ? Json(trace.at_step) : Json(nullptr);
  j["rank_lower_bounds"] = trace.rank_lower_bounds;
  j["note"] = trace.note;
  j["steps"] = std::move(steps);
  return j;
}

Json to_json(const StableKernel& kernel) {
  Json steps = Json::array();
  for (const auto& s : kernel.steps)
    steps.push_back({{"depth", s.depth},
                     {"columns", s.columns},
                     {"rows", s.rows},
                     {"rank", s.rank}});
  Json basis = Json::array();
  for (const auto& chain : kernel.basis) basis.push_back(to_json(chain));
  Json j;
  j["verdict"] = to_string(kernel.verdict);
  j["at_depth"] =
      kernel.verdict == Verdict::stabilized ? Json(kernel.at_depth) : Json(nullptr);
  j["group"] = to_json(kernel.group);
  j["basis"] = std::move(basis);
  j["steps"] = std::move(steps);
  return j;
}

std::string trace_csv(const LimitTrace& trace) {
  std::ostringstream out;
  out << "step,omega_size,generators,free_rank,torsion,image_rank,verdict\n";
  for (const auto& s : trace.steps) {
    std::string torsion;
    for (const auto& t : s.group.torsion) {
      if (!torsion.empty()) torsion += ';';
      torsion += t.get_str();
    }
    out << s.index << ',' << s.omega_size << ',' << s.generators << ','
        << s.group.free_rank.to_string() << ',' << torsion << ','
        << s.stable_image().free_rank.value() << ',' << to_string(trace.verdict)
        << '\n';
  }
  return out.str();
}

}  // namespace bhk
