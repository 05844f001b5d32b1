#pragma once

// Plain-text edge lists: a header line "# n=<n> seed=<seed>" followed by one
// "i j" pair per line, 0-indexed with i < j, in row-major order.

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "eirg/error.hpp"
#include "eirg/models.hpp"

namespace eirg {

inline void write_edge_list(std::ostream& out, const Matrix& adj, std::uint64_t seed) {
  out << "# n=" << adj.rows() << " seed=" << seed << '\n';
  for (Index i = 0; i < adj.rows(); ++i) {
    for (Index j = i + 1; j < adj.cols(); ++j) {
      if (adj(i, j) != 0.0) out << i << ' ' << j << '\n';
    }
  }
}

inline void write_edge_list(std::ostream& out, const GraphSample& gs) {
  write_edge_list(out, gs.adjacency(), gs.seed());
}

/// Reads the format written by write_edge_list. The header must give n;
/// "seed=" is optional.
inline Matrix read_edge_list(std::istream& in) {
  std::string line;
  Index n = -1;
  Matrix adj;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (n >= 0) continue;
      const auto pos = line.find("n=");
      if (pos == std::string::npos) throw InvalidArgument("edge list: header lacks n=");
      n = std::stoll(line.substr(pos + 2));
      if (n < 1) throw InvalidArgument("edge list: n must be positive");
      adj = Matrix::Zero(n, n);
      continue;
    }
    if (n < 0) throw InvalidArgument("edge list: missing '# n=' header");
    std::istringstream ls(line);
    long long i = -1, j = -1;
    if (!(ls >> i >> j) || i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw InvalidArgument("edge list: bad edge on line " + std::to_string(lineno));
    }
    adj(i, j) = adj(j, i) = 1.0;
  }
  if (n < 0) throw InvalidArgument("edge list: empty input");
  return adj;
}

inline Matrix load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open edge list " + path);
  return read_edge_list(in);
}

}  // namespace eirg
