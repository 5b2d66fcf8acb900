// graphheat command-line tool. Data goes to --out (stdout for "-"); a JSON
// run manifest goes next to the output file, to --manifest, or to stderr
// when the data went to stdout.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "graphheat/graphheat.hpp"

#ifndef GRAPHHEAT_VERSION
#define GRAPHHEAT_VERSION "0.0.0"
#endif

using namespace graphheat;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw NumericalError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

/// Per-run bookkeeping shared by all subcommands.
struct Run {
  std::string command;
  json inputs = json::object();
  json config = json::object();
  json results = json::object();
  json outputs = json::array();
  std::vector<std::string> warnings;

  std::string read(const std::string& path) {
    std::string bytes;
    if (path == "-") {
      std::stringstream s;
      s << std::cin.rdbuf();
      bytes = s.str();
    } else {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw InputError("cannot open '" + path + "'");
      std::stringstream s;
      s << in.rdbuf();
      bytes = s.str();
    }
    inputs[path] = "sha256:" + sha256_hex(bytes);
    return bytes;
  }

  void write(const std::string& path, const std::string& data) {
    if (path == "-") {
      std::cout << data;
      std::cout.flush();
    } else {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InputError("cannot write '" + path + "'");
      out << data;
    }
    outputs.push_back(path);
  }
};

struct GraphInput {
  std::string edges;
  std::string voxmask;
  std::string conn = "n18";

  void add(CLI::App* sub) {
    auto* e = sub->add_option("--edges", edges, "edge list file");
    auto* v = sub->add_option("--voxmask", voxmask, "voxel mask file");
    e->excludes(v);
    sub->add_option("--conn", conn, "voxel connectivity")->check(CLI::IsMember({"n4", "n8", "n6", "n18", "n26"}));
  }

  Graph load(Run& run) const {
    if (edges.empty() == voxmask.empty()) throw InputError("give exactly one of --edges or --voxmask");
    if (!edges.empty()) {
      std::istringstream in(run.read(edges));
      run.config["edges"] = edges;
      return io::read_graph(in);
    }
    std::istringstream in(run.read(voxmask));
    run.config["voxmask"] = voxmask;
    run.config["conn"] = conn;
    return from_voxel_mask(io::parse_voxel_mask(in), parse_conn(conn));
  }

  static Connectivity parse_conn(const std::string& c) {
    if (c == "n4") return Connectivity::N4_2D;
    if (c == "n8") return Connectivity::N8_2D;
    if (c == "n6") return Connectivity::N6_3D;
    if (c == "n26") return Connectivity::N26_3D;
    return Connectivity::N18_3D;
  }
};

/// "full" or a positive count.
std::optional<std::size_t> parse_num_eig(const std::string& s) {
  if (s.empty() || s == "full") return std::nullopt;
  std::size_t k = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
  if (ec != std::errc() || p != s.data() + s.size() || k == 0) throw InputError("--num-eig expects a positive integer or 'full', got '" + s + "'");
  return k;
}

SpectralBasis basis_for(const Graph& g, const std::string& num_eig, Run& run) {
  const auto k = parse_num_eig(num_eig);
  run.config["num_eig"] = k ? json(*k) : json("full");
  auto basis = spectral_basis(build_laplacian(g), k);
  if (!basis.complete) {
    run.warnings.push_back("truncated basis: " + std::to_string(basis.size()) + " of " + std::to_string(g.n_nodes) +
                           " eigenpairs; kernel is a low-pass approximation and not doubly stochastic");
  }
  return basis;
}

NodeSignal load_signal(Run& run, const std::string& path, std::size_t n) {
  std::istringstream in(run.read(path));
  run.config["signal"] = path;
  NodeSignal f = io::parse_signal(in);
  if (static_cast<std::size_t>(f.size()) != n) {
    throw InputError("signal has " + std::to_string(f.size()) + " nodes, graph has " + std::to_string(n));
  }
  return f;
}

std::string signal_text(const NodeSignal& f, std::string_view name = "value") {
  std::ostringstream s;
  io::write_signal(s, f, name);
  return s.str();
}

std::vector<std::size_t> parse_node_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto end = std::min(s.find(',', pos), s.size());
    const std::string tok = s.substr(pos, end - pos);
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size()) throw InputError("bad node list '" + s + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

// ---- subcommands -----------------------------------------------------------

struct LaplacianCmd {
  GraphInput graph;
  std::string out = "-";

  void run(Run& r) const {
    const Graph g = graph.load(r);
    std::ostringstream s;
    io::write_coordinate(s, build_laplacian(g).l);
    r.results["n_nodes"] = g.n_nodes;
    r.results["n_edges"] = g.edge_count();
    r.write(out, s.str());
  }
};

struct EigCmd {
  GraphInput graph;
  std::string num_eig = "full";
  std::string vectors;
  std::string out = "-";

  void run(Run& r) const {
    const Graph g = graph.load(r);
    const auto basis = basis_for(g, num_eig, r);
    const std::vector<std::string> head{"index", "eigenvalue"};
    DenseMatrix table(static_cast<Eigen::Index>(basis.size()), 2);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      table(static_cast<Eigen::Index>(j), 0) = static_cast<double>(j + 1);
      table(static_cast<Eigen::Index>(j), 1) = basis.eigenvalue(j);
    }
    std::ostringstream s;
    io::write_table(s, head, table);
    r.write(out, s.str());
    if (!vectors.empty()) {
      std::vector<std::string> vh{"node"};
      for (std::size_t j = 0; j < basis.size(); ++j) vh.push_back("psi_" + std::to_string(j + 1));
      DenseMatrix v(basis.eigenvectors.rows(), basis.eigenvectors.cols() + 1);
      for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, 0) = static_cast<double>(i);
      v.rightCols(basis.eigenvectors.cols()) = basis.eigenvectors;
      std::ostringstream vs;
      io::write_table(vs, vh, v);
      r.write(vectors, vs.str());
    }
  }
};

struct SmoothCmd {
  GraphInput graph;
  std::string signal;
  double sigma = 1.0;
  std::string num_eig = "full";
  std::string out = "-";

  void run(Run& r) const {
    const Graph g = graph.load(r);
    const NodeSignal f = load_signal(r, signal, g.n_nodes);
    r.config["sigma"] = sigma;
    const auto kernel = build_kernel(basis_for(g, num_eig, r), sigma);
    r.results["truncated"] = kernel.truncated();
    r.write(out, signal_text(smooth(kernel, f)));
  }
};

struct FiedlerCmd {
  GraphInput graph;
  std::string out = "-";

  void run(Run& r) const {
    const Graph g = graph.load(r);
    const auto result = fiedler_vector(spectral_basis(build_laplacian(g)));
    r.results["eigenvalue"] = result.eigenvalue;
    r.results["tight"] = is_tight(result.vector, g);
    if (result.degenerate) r.warnings.push_back("lambda_2 is repeated; the Fiedler vector is not unique");
    r.write(out, signal_text(result.vector));
  }
};

struct DiffuseCmd {
  std::string signal;
  std::string shape;
  std::string stencil;
  double dt = 0.01;
  std::size_t steps = 10000;
  std::string boundary = "zero";
  bool check_stability = false;
  double spacing = 1.0;
  std::string oracle;
  std::size_t terms = 500;
  double halfwidth = 0.0;
  std::string oracle_out;
  std::string out = "-";

  void run(Run& r) const {
    std::istringstream in(r.read(signal));
    const NodeSignal f = io::parse_signal(in);
    std::vector<std::size_t> dims = shape.empty() ? std::vector<std::size_t>{static_cast<std::size_t>(f.size())} : parse_node_list(shape);
    const std::vector<double> values(f.data(), f.data() + f.size());
    const GridSignal grid(dims, values, std::vector<double>(dims.size(), spacing));

    std::string name = stencil.empty() ? (dims.size() == 1 ? "lap1d" : dims.size() == 2 ? "n4" : "nd") : stencil;
    Stencil st = lap1d_3pt();
    if (name == "n4") st = lap2d_n4();
    else if (name == "n8") st = lap2d_n8();
    else if (name == "nd") st = lapnd_2n(dims.size());
    DiffusionConfig cfg{dt, steps, boundary == "replicate" ? Boundary::REPLICATE : Boundary::ZERO_PAD, check_stability};

    r.config["signal"] = signal;
    r.config["shape"] = dims;
    r.config["stencil"] = name;
    r.config["dt"] = dt;
    r.config["steps"] = steps;
    r.config["boundary"] = boundary;
    r.config["spacing"] = spacing;
    r.config["check_stability"] = check_stability;

    const double bound = stability_dt_bound(grid, st, cfg.boundary);
    r.results["stability_dt_bound"] = std::isfinite(bound) ? json(bound) : json(nullptr);
    if (!check_stability && dt > bound) r.warnings.push_back("dt exceeds the one-step maximum-principle bound " + io::format_double(bound));

    const GridSignal res = diffuse(grid, st, cfg);
    r.write(out, signal_text(Eigen::Map<const Vector>(res.values.data(), static_cast<Eigen::Index>(res.values.size()))));

    if (!oracle.empty()) {
      if (oracle_out.empty()) throw InputError("--oracle needs --oracle-out");
      if (dims.size() != 1) throw InputError("the Fourier oracle is one-dimensional");
      const double l = halfwidth > 0.0 ? halfwidth : 0.5 * spacing * static_cast<double>(dims[0]);
      const double t = dt * static_cast<double>(steps);
      const auto a = analytic_solution_1d(grid, t, terms, l);
      r.config["oracle"] = oracle;
      r.config["terms"] = terms;
      r.config["halfwidth"] = l;
      r.results["oracle_terms_used"] = a.terms_used;
      r.results["oracle_truncation_rms"] = a.truncation_rms;
      if (a.terms_used < terms) r.warnings.push_back("oracle terms capped at " + std::to_string(a.terms_used) + " by the grid size");
      const auto& v = a.solution.values;
      r.write(oracle_out, signal_text(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()))));
    }
  }
};

struct LocalLaplacianCmd {
  std::string points;
  std::size_t center = 0;
  std::string out = "-";

  void run(Run& r) const {
    std::istringstream in(r.read(points));
    const std::vector<std::string> head{"x", "y", "value"};
    const DenseMatrix t = io::parse_table(in, head);
    if (center >= static_cast<std::size_t>(t.rows())) throw InputError("--center row " + std::to_string(center) + " out of range");
    r.config["points"] = points;
    r.config["center"] = center;
    NeighborhoodSample s{{t(static_cast<Eigen::Index>(center), 0), t(static_cast<Eigen::Index>(center), 1)}, {}};
    for (Eigen::Index i = 0; i < t.rows(); ++i) s.neighbors.push_back({{t(i, 0), t(i, 1)}, t(i, 2)});
    const auto fit = fit_quadratic(s);
    if (fit.ill_conditioned) r.warnings.push_back("quadratic fit is rank deficient or ill-conditioned (rank " + std::to_string(fit.rank) + ")");
    std::ostringstream o;
    o << "quantity,value\n";
    for (std::size_t k = 0; k < 6; ++k) o << "beta_" << k << ',' << io::format_double(fit.beta[k]) << '\n';
    o << "laplacian," << io::format_double(laplacian_from_fit(fit)) << '\n';
    o << "rank," << fit.rank << '\n';
    o << "condition," << io::format_double(fit.condition) << '\n';
    o << "residual_norm," << io::format_double(fit.residual_norm) << '\n';
    r.write(out, o.str());
  }
};

struct LaplaceCmd {
  GraphInput graph;
  std::string plus;
  std::string minus;
  std::string num_eig = "full";
  double boundary_weight = 1.0;
  std::uint64_t seed = 0;
  std::string field;
  std::string out = "-";

  void run(Run& r) const {
    const Graph g = graph.load(r);
    if (plus.empty() != minus.empty()) throw InputError("give both --plus and --minus, or neither");
    const BoundarySpec b = plus.empty() ? default_boundary(g) : BoundarySpec{parse_node_list(plus), parse_node_list(minus)};
    r.config["plus"] = b.g_plus;
    r.config["minus"] = b.g_minus;
    r.config["boundary_weight"] = boundary_weight;
    r.config["seed"] = seed;
    const auto basis = basis_for(g, num_eig, r);
    const auto interior = sample_interior(g.n_nodes, b, seed);
    const auto sol = solve(assemble(basis, b, interior, basis.size(), boundary_weight));
    r.results["system_residual"] = sol.system_residual;
    r.results["interior_residual"] = sol.interior_residual;
    r.write(out, signal_text(sol.potential, "potential"));
    if (!field.empty()) {
      std::ostringstream s;
      const auto grad = field_gradient(g, sol.potential);
      io::write_edge_field(s, grad);
      r.write(field, s.str());
    }
  }
};

struct WaveletCmd {
  GraphInput graph;
  std::string signal;
  std::string scale = "exp";
  double t = 1.0;
  std::string num_eig = "full";
  std::string out = "-";

  void run(Run& r) const {
    const Graph g = graph.load(r);
    const NodeSignal f = load_signal(r, signal, g.n_nodes);
    const ScaleFunctionRegistry reg;
    const auto sf = reg.make(scale, t);
    r.config["scale"] = scale;
    r.config["t"] = t;
    const auto basis = basis_for(g, num_eig, r);
    r.write(out, signal_text(wavelet_transform(basis, sf, f, basis.size())));
  }
};

struct SkeletonizeCmd {
  std::string voxmask;
  double sigma = 1.0;
  double scale = 1.0;
  std::string num_eig;
  std::string conn = "n18";
  std::string out_mask;
  std::string out_graph;
  std::string out_coords;

  void run(Run& r) const {
    std::istringstream in(r.read(voxmask));
    const VoxelMask mask = io::parse_voxel_mask(in);
    SkeletonConfig cfg;
    cfg.sigma = sigma;
    cfg.scale_factor = scale;
    cfg.num_eig = parse_num_eig(num_eig);
    cfg.connectivity = GraphInput::parse_conn(conn);
    r.config["voxmask"] = voxmask;
    r.config["sigma"] = sigma;
    r.config["scale"] = scale;
    r.config["conn"] = conn;
    r.config["num_eig"] = cfg.num_eig ? json(*cfg.num_eig) : json("default");
    const auto res = skeletonize(mask, cfg);
    if (res.truncated) r.warnings.push_back("coordinates smoothed with a truncated basis");
    r.results["input_voxels"] = mask.count();
    r.results["skeleton_voxels"] = res.mask.count();
    r.results["skeleton_components"] = connected_components(res.graph).size();
    std::ostringstream m;
    io::write_voxel_mask(m, res.mask);
    r.write(out_mask, m.str());
    if (!out_graph.empty()) {
      std::ostringstream s;
      io::write_edge_list(s, res.graph);
      r.write(out_graph, s.str());
    }
    if (!out_coords.empty()) {
      std::ostringstream s;
      const std::vector<std::string> head{"x", "y", "z"};
      io::write_table(s, head, *res.graph.coords);
      r.write(out_coords, s.str());
    }
  }
};

void emit_error(const std::string& command, const char* kind, const std::exception& e) {
  json err{{"error", kind}, {"command", command}, {"message", e.what()}};
  if (const auto* d = dynamic_cast<const DisconnectedGraphError*>(&e)) err["components"] = d->components();
  std::cerr << err.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernel smoothing and diffusion on graphs and grids", "graphheat"};
  app.set_version_flag("--version", GRAPHHEAT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  unsigned threads = 0;
  std::string manifest_path;
  app.add_option("--threads", threads, "worker thread cap")->envname("GRAPHHEAT_THREADS");
  app.add_option("--manifest", manifest_path, "write the run manifest here");

  LaplacianCmd lap;
  EigCmd eig;
  SmoothCmd sm;
  FiedlerCmd fd;
  DiffuseCmd df;
  LocalLaplacianCmd ll;
  LaplaceCmd lp;
  WaveletCmd wv;
  SkeletonizeCmd sk;
  std::function<void(Run&)> action;
  std::string primary_out;

  auto* c_lap = app.add_subcommand("laplacian", "write L = D - W in coordinate format");
  lap.graph.add(c_lap);
  c_lap->add_option("--out", lap.out);
  c_lap->callback([&] { action = [&](Run& r) { lap.run(r); }; primary_out = lap.out; });

  auto* c_eig = app.add_subcommand("eig", "smallest Laplacian eigenpairs");
  eig.graph.add(c_eig);
  c_eig->add_option("--num-eig", eig.num_eig, "k or full");
  c_eig->add_option("--vectors", eig.vectors, "also write eigenvectors here");
  c_eig->add_option("--out", eig.out);
  c_eig->callback([&] { action = [&](Run& r) { eig.run(r); }; primary_out = eig.out; });

  auto* c_sm = app.add_subcommand("smooth", "heat kernel smoothing of a node signal");
  sm.graph.add(c_sm);
  c_sm->add_option("--signal", sm.signal)->required();
  c_sm->add_option("--sigma", sm.sigma)->check(CLI::NonNegativeNumber);
  c_sm->add_option("--num-eig", sm.num_eig, "k or full");
  c_sm->add_option("--out", sm.out);
  c_sm->callback([&] { action = [&](Run& r) { sm.run(r); }; primary_out = sm.out; });

  auto* c_fd = app.add_subcommand("fiedler", "second Laplacian eigenvector");
  fd.graph.add(c_fd);
  c_fd->add_option("--out", fd.out);
  c_fd->callback([&] { action = [&](Run& r) { fd.run(r); }; primary_out = fd.out; });

  auto* c_df = app.add_subcommand("diffuse", "explicit finite-difference diffusion on a grid");
  c_df->add_option("--signal", df.signal)->required();
  c_df->add_option("--shape", df.shape, "grid extents, comma separated, last axis fastest");
  c_df->add_option("--stencil", df.stencil)->check(CLI::IsMember({"lap1d", "n4", "n8", "nd"}));
  c_df->add_option("--dt", df.dt);
  c_df->add_option("--steps", df.steps);
  c_df->add_option("--boundary", df.boundary)->check(CLI::IsMember({"zero", "replicate"}));
  c_df->add_flag("--check-stability", df.check_stability, "reject dt above the stability bound");
  c_df->add_option("--spacing", df.spacing)->check(CLI::PositiveNumber);
  c_df->add_option("--oracle", df.oracle)->check(CLI::IsMember({"fourier"}));
  c_df->add_option("--terms", df.terms);
  c_df->add_option("--halfwidth", df.halfwidth);
  c_df->add_option("--oracle-out", df.oracle_out);
  c_df->add_option("--out", df.out);
  c_df->callback([&] { action = [&](Run& r) { df.run(r); }; primary_out = df.out; });

  auto* c_ll = app.add_subcommand("local-laplacian", "Laplacian by local quadratic regression");
  c_ll->add_option("--points", ll.points, "CSV x,y,value")->required();
  c_ll->add_option("--center", ll.center, "row of the center point");
  c_ll->add_option("--out", ll.out);
  c_ll->callback([&] { action = [&](Run& r) { ll.run(r); }; primary_out = ll.out; });

  auto* c_lp = app.add_subcommand("laplace", "steady-state potential between two boundary sets");
  lp.graph.add(c_lp);
  c_lp->add_option("--plus", lp.plus, "nodes held at +1, comma separated");
  c_lp->add_option("--minus", lp.minus, "nodes held at -1, comma separated");
  c_lp->add_option("--num-eig", lp.num_eig, "k or full");
  c_lp->add_option("--boundary-weight", lp.boundary_weight);
  c_lp->add_option("--seed", lp.seed, "interior subsampling seed");
  c_lp->add_option("--field", lp.field, "write the edge field here");
  c_lp->add_option("--out", lp.out);
  c_lp->callback([&] { action = [&](Run& r) { lp.run(r); }; primary_out = lp.out; });

  auto* c_wv = app.add_subcommand("wavelet", "diffusion wavelet transform of a node signal");
  wv.graph.add(c_wv);
  c_wv->add_option("--signal", wv.signal)->required();
  c_wv->add_option("--scale", wv.scale, "scale function name");
  c_wv->add_option("--t", wv.t)->check(CLI::PositiveNumber);
  c_wv->add_option("--num-eig", wv.num_eig, "k or full");
  c_wv->add_option("--out", wv.out);
  c_wv->callback([&] { action = [&](Run& r) { wv.run(r); }; primary_out = wv.out; });

  auto* c_sk = app.add_subcommand("skeletonize", "skeleton of a binary voxel mask");
  c_sk->add_option("--voxmask", sk.voxmask)->required();
  c_sk->add_option("--sigma", sk.sigma)->check(CLI::NonNegativeNumber);
  c_sk->add_option("--scale", sk.scale)->check(CLI::PositiveNumber);
  c_sk->add_option("--num-eig", sk.num_eig, "k or full");
  c_sk->add_option("--conn", sk.conn)->check(CLI::IsMember({"n6", "n18", "n26"}));
  c_sk->add_option("--out-mask", sk.out_mask)->required();
  c_sk->add_option("--out-graph", sk.out_graph);
  c_sk->add_option("--out-coords", sk.out_coords);
  c_sk->callback([&] { action = [&](Run& r) { sk.run(r); }; primary_out = sk.out_mask; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitInput;
  }

  if (threads > 0) set_max_threads(threads);

  Run run;
  run.command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    action(run);
  } catch (const InputError& e) {
    emit_error(run.command, "input", e);
    return kExitInput;
  } catch (const NumericalError& e) {
    emit_error(run.command, "numerical", e);
    return kExitNumerical;
  } catch (const std::exception& e) {
    emit_error(run.command, "numerical", e);
    return kExitNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest{{"command", run.command},
                {"version", GRAPHHEAT_VERSION},
                {"inputs", run.inputs},
                {"config", run.config},
                {"outputs", run.outputs},
                {"results", run.results},
                {"warnings", run.warnings},
                {"wall_time_s", wall}};
  const std::string text = manifest.dump(2) + "\n";
  const std::string target = !manifest_path.empty() ? manifest_path : primary_out == "-" ? "" : primary_out + ".manifest.json";
  if (target.empty()) {
    std::cerr << text;
  } else {
    std::ofstream out(target, std::ios::binary);
    if (!out) {
      std::cerr << json{{"error", "input"}, {"command", run.command}, {"message", "cannot write manifest '" + target + "'"}}.dump() << '\n';
      return kExitInput;
    }
    out << text;
  }
  return 0;
}
