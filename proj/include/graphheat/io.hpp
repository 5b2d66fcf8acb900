#pragma once

// Text formats: edge lists, voxel masks, node-signal CSV, sparse coordinate
// matrices, edge-field CSV and point CSV. Floats are written with 17
// significant digits so every emit/parse round trip is exact.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "graphheat/laplace_galerkin.hpp"

namespace graphheat::io {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (sep == ' ') {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      if (i >= s.size()) break;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

inline std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw InputError(where(line) + "expected a nonnegative integer, got '" + std::string(tok) + "'");
  return v;
}

inline double parse_real(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
    throw InputError(where(line) + "expected a finite number, got '" + std::string(tok) + "'");
  return v;
}

/// Calls fn(line_number, content) for every non-blank line, comments kept.
template <class Fn>
void for_each_line(std::istream& in, Fn fn) {
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    const auto s = trim(raw);
    if (!s.empty()) fn(no, s);
  }
}

}  // namespace detail

// ---- edge lists -----------------------------------------------------------

struct EdgeList {
  std::vector<Edge> edges;
  std::size_t n_nodes = 0;
};

/// `i j w` per line, `#` comments. A `# nodes N` comment declares isolated
/// trailing nodes; otherwise the node count is the largest index plus one.
inline EdgeList parse_edge_list(std::istream& in) {
  EdgeList out;
  std::size_t declared = 0;
  detail::for_each_line(in, [&](std::size_t no, std::string_view s) {
    if (s.front() == '#') {
      const auto tok = detail::split(s.substr(1), ' ');
      if (tok.size() == 2 && tok[0] == "nodes") declared = detail::parse_index(tok[1], no);
      return;
    }
    const auto tok = detail::split(s, ' ');
    if (tok.size() != 3) throw InputError(detail::where(no) + "expected 'i j w'");
    Edge e{detail::parse_index(tok[0], no), detail::parse_index(tok[1], no), detail::parse_real(tok[2], no)};
    out.n_nodes = std::max(out.n_nodes, std::max(e.i, e.j) + 1);
    out.edges.push_back(e);
  });
  if (declared) {
    if (declared < out.n_nodes) throw InputError("edge list declares " + std::to_string(declared) + " nodes but uses index " + std::to_string(out.n_nodes - 1));
    out.n_nodes = declared;
  }
  return out;
}

inline Graph read_graph(std::istream& in) {
  const auto el = parse_edge_list(in);
  if (el.n_nodes == 0) throw InputError("edge list is empty and declares no nodes");
  return from_edge_list(el.edges, el.n_nodes);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.n_nodes << '\n';
  for (const auto& e : g.edges()) out << e.i << ' ' << e.j << ' ' << format_double(e.w) << '\n';
}

// ---- voxel masks ----------------------------------------------------------

/// Header `voxmask nx ny nz dx dy dz`, then whitespace-separated run lengths
/// over the scan order (x fastest), alternating empty/occupied and starting
/// with an empty run (possibly 0). Without the header, each line is an
/// occupied `x y z` with unit spacing and the bounding shape.
inline VoxelMask parse_voxel_mask(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::istringstream probe(text);
  std::string first;
  probe >> first;
  if (first == "voxmask") {
    std::array<std::size_t, 3> shape{};
    std::array<double, 3> spacing{};
    std::string tok;
    for (auto& s : shape) {
      if (!(probe >> tok)) throw InputError("voxmask header: missing extent");
      s = detail::parse_index(tok, 1);
    }
    for (auto& d : spacing) {
      if (!(probe >> tok)) throw InputError("voxmask header: missing spacing");
      d = detail::parse_real(tok, 1);
    }
    VoxelMask m(shape, spacing);
    std::size_t pos = 0;
    bool on = false;
    while (probe >> tok) {
      const std::size_t run = detail::parse_index(tok, 0);
      if (run > m.size() - pos) throw InputError("voxmask runs exceed " + std::to_string(m.size()) + " voxels");
      if (on) std::fill_n(m.occupancy.begin() + static_cast<std::ptrdiff_t>(pos), run, std::uint8_t{1});
      pos += run;
      on = !on;
    }
    if (pos != m.size()) throw InputError("voxmask runs cover " + std::to_string(pos) + " of " + std::to_string(m.size()) + " voxels");
    return m;
  }

  std::vector<std::array<std::size_t, 3>> pts;
  std::istringstream lines(text);
  detail::for_each_line(lines, [&](std::size_t no, std::string_view s) {
    if (s.front() == '#') return;
    const auto tok = detail::split(s, ' ');
    if (tok.size() != 3) throw InputError(detail::where(no) + "expected 'x y z'");
    pts.push_back({detail::parse_index(tok[0], no), detail::parse_index(tok[1], no), detail::parse_index(tok[2], no)});
  });
  if (pts.empty()) throw InputError("voxel list is empty");
  std::array<std::size_t, 3> shape{1, 1, 1};
  for (const auto& p : pts)
    for (std::size_t a = 0; a < 3; ++a) shape[a] = std::max(shape[a], p[a] + 1);
  VoxelMask m(shape);
  for (const auto& p : pts) m.set(p[0], p[1], p[2]);
  return m;
}

inline void write_voxel_mask(std::ostream& out, const VoxelMask& m) {
  out << "voxmask " << m.shape[0] << ' ' << m.shape[1] << ' ' << m.shape[2];
  for (double d : m.spacing) out << ' ' << format_double(d);
  out << '\n';
  std::size_t pos = 0;
  bool on = false;
  std::size_t written = 0;
  while (pos < m.size()) {
    std::size_t run = 0;
    while (pos + run < m.size() && (m.occupancy[pos + run] != 0) == on) ++run;
    out << (written++ % 16 ? " " : "") << run;
    if (written % 16 == 0) out << '\n';
    pos += run;
    on = !on;
  }
  if (written % 16) out << '\n';
}

// ---- node signals ---------------------------------------------------------

/// CSV with header `node,value`; every node 0..n-1 exactly once, any order.
inline NodeSignal parse_signal(std::istream& in) {
  std::vector<std::pair<std::size_t, double>> rows;
  bool header = false;
  detail::for_each_line(in, [&](std::size_t no, std::string_view s) {
    if (s.front() == '#') return;
    if (!header) {
      if (s != "node,value") throw InputError(detail::where(no) + "expected header 'node,value'");
      header = true;
      return;
    }
    const auto f = detail::split(s, ',');
    if (f.size() != 2) throw InputError(detail::where(no) + "expected 'node,value'");
    rows.emplace_back(detail::parse_index(f[0], no), detail::parse_real(f[1], no));
  });
  if (!header) throw InputError("signal CSV is empty");
  NodeSignal v(static_cast<Eigen::Index>(rows.size()));
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [i, x] : rows) {
    if (i >= rows.size()) throw InputError("signal node " + std::to_string(i) + " out of range for " + std::to_string(rows.size()) + " rows");
    if (seen[i]) throw InputError("signal node " + std::to_string(i) + " repeated");
    seen[i] = true;
    v[static_cast<Eigen::Index>(i)] = x;
  }
  return v;
}

inline void write_signal(std::ostream& out, const NodeSignal& f, std::string_view value_name = "value") {
  out << "node," << value_name << '\n';
  for (Eigen::Index i = 0; i < f.size(); ++i) out << i << ',' << format_double(f[i]) << '\n';
}

// ---- sparse coordinate matrices -------------------------------------------

/// `# coordinate n nnz` followed by one `i j v` per stored entry, both triangles.
inline void write_coordinate(std::ostream& out, const SparseSymMatrix& m) {
  out << "# coordinate " << m.dim() << ' ' << m.nnz() << '\n';
  for (const auto& t : m.triplets()) out << t.row << ' ' << t.col << ' ' << format_double(t.value) << '\n';
}

inline SparseSymMatrix parse_coordinate(std::istream& in) {
  std::optional<std::size_t> dim;
  std::size_t nnz = 0;
  std::vector<Triplet> all;
  detail::for_each_line(in, [&](std::size_t no, std::string_view s) {
    if (s.front() == '#') {
      const auto tok = detail::split(s.substr(1), ' ');
      if (tok.size() == 3 && tok[0] == "coordinate") {
        dim = detail::parse_index(tok[1], no);
        nnz = detail::parse_index(tok[2], no);
      }
      return;
    }
    const auto tok = detail::split(s, ' ');
    if (tok.size() != 3) throw InputError(detail::where(no) + "expected 'i j v'");
    all.push_back({detail::parse_index(tok[0], no), detail::parse_index(tok[1], no), detail::parse_real(tok[2], no)});
  });
  if (!dim) throw InputError("coordinate matrix lacks its '# coordinate n nnz' header");
  if (all.size() != nnz) throw InputError("coordinate matrix header promises " + std::to_string(nnz) + " entries, found " + std::to_string(all.size()));
  std::vector<Triplet> upper;
  for (const auto& t : all) {
    if (t.row >= *dim || t.col >= *dim) throw InputError("coordinate entry out of range");
    if (t.row <= t.col) upper.push_back(t);
  }
  auto m = SparseSymMatrix::from_triplets(*dim, upper);
  for (const auto& t : all)
    if (m.at(t.row, t.col) != t.value) throw InputError("coordinate matrix is not symmetric");
  return m;
}

// ---- edge fields and dense tables -----------------------------------------

inline void write_edge_field(std::ostream& out, std::span<const EdgeValue> field) {
  out << "i,j,value\n";
  for (const auto& e : field) out << e.i << ',' << e.j << ',' << format_double(e.value) << '\n';
}

inline std::vector<EdgeValue> parse_edge_field(std::istream& in) {
  std::vector<EdgeValue> out;
  bool header = false;
  detail::for_each_line(in, [&](std::size_t no, std::string_view s) {
    if (!header) {
      if (s != "i,j,value") throw InputError(detail::where(no) + "expected header 'i,j,value'");
      header = true;
      return;
    }
    const auto f = detail::split(s, ',');
    if (f.size() != 3) throw InputError(detail::where(no) + "expected 'i,j,value'");
    out.push_back({detail::parse_index(f[0], no), detail::parse_index(f[1], no), detail::parse_real(f[2], no)});
  });
  return out;
}

/// Header row of names, then numeric rows; returns the numeric block.
inline DenseMatrix parse_table(std::istream& in, std::span<const std::string> expected_header) {
  std::vector<std::vector<double>> rows;
  bool header = false;
  detail::for_each_line(in, [&](std::size_t no, std::string_view s) {
    if (s.front() == '#') return;
    const auto f = detail::split(s, ',');
    if (!header) {
      bool ok = f.size() == expected_header.size();
      for (std::size_t c = 0; ok && c < f.size(); ++c) ok = f[c] == expected_header[c];
      if (!ok) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        throw InputError(detail::where(no) + "expected header '" + want + "'");
      }
      header = true;
      return;
    }
    if (f.size() != expected_header.size()) throw InputError(detail::where(no) + "wrong field count");
    std::vector<double> r;
    for (auto tok : f) r.push_back(detail::parse_real(tok, no));
    rows.push_back(std::move(r));
  });
  if (!header) throw InputError("table is empty");
  DenseMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(expected_header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return m;
}

inline void write_table(std::ostream& out, std::span<const std::string> header, const DenseMatrix& m) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(i, c));
    out << '\n';
  }
}

}  // namespace graphheat::io
