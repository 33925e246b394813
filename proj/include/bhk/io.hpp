#pragma once

// Text formats and JSON/CSV renderings.
//
// Graph files, one declaration per line, '#' starts a comment:
//   V <vertex>
//   E <edge> <vertex> <vertex>     (equal vertices make a loop)
//   R <ray> <vertex>
//   T <tree> <vertex> <branching>
// Matrix files: "rows cols" followed by the rows.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bhk/graph.hpp"
#include "bhk/ktheory.hpp"
#include "bhk/limitlab.hpp"
#include "bhk/zlinalg.hpp"

namespace bhk {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Presentation parse_graph(std::istream& in);
Presentation load_graph(const std::filesystem::path& path);
std::string format_graph(const Presentation& p);

IntMatrix parse_matrix(std::istream& in);
IntMatrix load_matrix(const std::filesystem::path& path);

Json to_json(const Integer& x);
Json to_json(const AbelianGroup& g);
Json to_json(const EdgeChain& chain);
Json to_json(const LimitTrace& trace);
Json to_json(const StableKernel& kernel);

/// Columns: step, omega_size, generators, free_rank, torsion, image_rank,
/// verdict. Torsion factors are joined with ';'.
std::string trace_csv(const LimitTrace& trace);

}  // namespace bhk
