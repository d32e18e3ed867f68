#include "gdfl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <zlib.h>

#include "gdfl/error.hpp"
#include "gdfl/rng.hpp"

namespace gdfl {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw DataError("edge (" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + ") out of range for n=" +
                      std::to_string(n));
    }
    if (e.u == e.v) {
      throw DataError("self-loop at node " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v) {
      throw DataError("duplicate edge (" + std::to_string(edges[k].u) + "," +
                      std::to_string(edges[k].v) + ")");
    }
  }
  edges_ = std::move(edges);

  std::vector<std::size_t> count(n_, 0);
  for (const auto& e : edges_) {
    ++count[e.u];
    ++count[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + count[v];
  adj_.resize(offsets_[n_]);
  adj_w_.resize(offsets_[n_]);
  degree_.assign(n_, 0.0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Smaller neighbours first, then larger ones: canonical edge order makes
  // every neighbour list ascending.
  for (const auto& e : edges_) {
    adj_[cursor[e.v]] = e.u;
    adj_w_[cursor[e.v]++] = e.w;
    degree_[e.v] += e.w;
  }
  for (const auto& e : edges_) {
    adj_[cursor[e.u]] = e.v;
    adj_w_[cursor[e.u]++] = e.w;
    degree_[e.u] += e.w;
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= n_ || v >= n_) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (first != last && *first == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

void append_number(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

}  // namespace

Graph parse_gset(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  do {
    if (!next_line(line)) throw ParseError(line_no, "missing header \"n m\"");
  } while (is_blank(line));

  auto head = split_ws(line);
  std::size_t n = 0;
  std::size_t m = 0;
  if (head.size() != 2 || !parse_number(head[0], n) || !parse_number(head[1], m)) {
    throw ParseError(line_no, "expected header \"n m\"");
  }
  if (n > std::numeric_limits<NodeId>::max()) {
    throw ParseError(line_no, "node count too large");
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<std::pair<NodeId, NodeId>> seen;
  seen.reserve(m);
  std::vector<std::size_t> origin;
  origin.reserve(m);
  while (edges.size() < m) {
    if (!next_line(line)) {
      throw ParseError(line_no, "expected " + std::to_string(m) + " edges, found " +
                                    std::to_string(edges.size()));
    }
    if (is_blank(line)) continue;
    auto tok = split_ws(line);
    std::size_t i = 0;
    std::size_t j = 0;
    double w = 0.0;
    if (tok.size() != 3 || !parse_number(tok[0], i) || !parse_number(tok[1], j) ||
        !parse_number(tok[2], w) || !std::isfinite(w)) {
      throw ParseError(line_no, "expected \"i j w\"");
    }
    if (i < 1 || j < 1 || i > n || j > n) {
      throw ParseError(line_no, "node index out of range 1.." + std::to_string(n));
    }
    if (i == j) throw ParseError(line_no, "self-loop");
    auto u = static_cast<NodeId>(i - 1);
    auto v = static_cast<NodeId>(j - 1);
    edges.push_back({u, v, w});
    seen.emplace_back(std::min(u, v), std::max(u, v));
    origin.push_back(line_no);
  }
  while (next_line(line)) {
    if (!is_blank(line)) throw ParseError(line_no, "unexpected data after last edge");
  }

  std::vector<std::size_t> order(seen.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seen[a] != seen[b] ? seen[a] < seen[b] : a < b;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (seen[order[k]] == seen[order[k - 1]]) {
      throw ParseError(origin[order[k]], "duplicate edge");
    }
  }
  return Graph(n, std::move(edges));
}

std::string write_gset(const Graph& g) {
  std::string out;
  out += std::to_string(g.num_nodes());
  out += ' ';
  out += std::to_string(g.num_edges());
  out += '\n';
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u + 1);
    out += ' ';
    out += std::to_string(e.v + 1);
    out += ' ';
    append_number(out, e.w);
    out += '\n';
  }
  return out;
}

Graph read_gset_file(const std::filesystem::path& path) {
  std::string text;
  if (path.extension() == ".gz") {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) throw DataError("cannot open " + path.string());
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(file, buf, sizeof buf)) > 0) text.append(buf, got);
    const bool failed = got < 0;
    gzclose(file);
    if (failed) throw DataError("corrupt gzip stream in " + path.string());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = std::move(ss).str();
  }
  try {
    return parse_gset(text);
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Graph generate_d_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if ((n * d) % 2 != 0 || d >= n) {
    throw InvalidArgument("d-regular graph needs n*d even and d < n (n=" +
                          std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  Rng rng(seed);
  std::vector<NodeId> stubs(n * d);
  std::vector<std::pair<NodeId, NodeId>> pairs(stubs.size() / 2);
  for (;;) {
    for (std::size_t k = 0; k < stubs.size(); ++k) stubs[k] = static_cast<NodeId>(k / d);
    rng.shuffle(std::span(stubs));
    bool simple = true;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      NodeId a = stubs[2 * k];
      NodeId b = stubs[2 * k + 1];
      if (a == b) {
        simple = false;
        break;
      }
      pairs[k] = {std::min(a, b), std::max(a, b)};
    }
    if (!simple) continue;
    std::vector<std::pair<NodeId, NodeId>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;

    std::vector<Edge> edges;
    edges.reserve(sorted.size());
    for (auto [a, b] : sorted) edges.push_back({a, b, 1.0});
    return Graph(n, std::move(edges));
  }
}

Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.unit() < p) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<std::int64_t> local(g.num_nodes(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = static_cast<std::int64_t>(k);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0) {
      edges.push_back({static_cast<NodeId>(local[e.u]), static_cast<NodeId>(local[e.v]), e.w});
    }
  }
  return Graph(nodes.size(), std::move(edges));
}

ObservedSample sample_observed_subgraph(const Graph& g, double fraction,
                                        std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("observe fraction must lie in (0, 1]");
  }
  const auto keep = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(g.num_nodes())));
  if (keep == 0) throw InvalidArgument("observe fraction keeps no nodes");

  std::vector<NodeId> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), NodeId{0});
  Rng rng(seed);
  rng.shuffle(std::span(perm));
  perm.resize(keep);
  std::sort(perm.begin(), perm.end());

  ObservedSample s;
  s.observed_graph = induced_subgraph(g, perm);
  s.kept_nodes = std::move(perm);
  s.original_n = g.num_nodes();
  return s;
}

Eigen::SparseMatrix<double> renormalized_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  std::vector<double> dhat(g.num_nodes(), 1.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (double w : g.neighbor_weights(v)) dhat[v] += std::abs(w);
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.num_nodes() + 2 * g.num_edges());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    trip.emplace_back(v, v, 1.0 / dhat[v]);
  }
  for (const auto& e : g.edges()) {
    const double a = e.w / std::sqrt(dhat[e.u] * dhat[e.v]);
    trip.emplace_back(e.u, e.v, a);
    trip.emplace_back(e.v, e.u, a);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace gdfl
