// moyal-spin: command-line front end.
//
// Exit codes: 0 success, 2 invalid input, 3 degenerate or singular constellation.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <moyal/io.hpp>
#include <moyal/spinhalf.hpp>
#include <moyal/tomography.hpp>

namespace {

using namespace moyal;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_degenerate = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(io::parse_angle(item));
  return out;
}

// "ax,ay,az;angle;count[;offset]"
ConeSpec parse_cone(const std::string& text) {
  const auto parts = split(text, ';');
  if (parts.size() < 3 || parts.size() > 4)
    throw io::FormatError("cone spec '" + text + "' must be 'ax,ay,az;angle;count[;offset]'");
  const auto axis = split(parts[0], ',');
  if (axis.size() != 3) throw io::FormatError("cone axis in '" + text + "' needs three components");
  ConeSpec spec;
  for (int k = 0; k < 3; ++k) spec.axis(k) = io::parse_angle(axis[static_cast<std::size_t>(k)]);
  spec.angle = io::parse_angle(parts[1]);
  const double count = io::parse_angle(parts[2]);
  if (count != static_cast<int>(count)) throw io::FormatError("cone point count must be an integer");
  spec.count = static_cast<int>(count);
  if (parts.size() == 4) spec.offset = io::parse_angle(parts[3]);
  return spec;
}

std::ostream& report_stream(const std::string& out_path) { return out_path == "-" ? std::cerr : std::cout; }

int effective_threads(int flag) {
  if (const char* env = std::getenv("MOYAL_SPIN_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw io::FormatError("MOYAL_SPIN_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  if (flag < 1) throw io::FormatError("--threads must be positive");
  return flag;
}

int emit_constellation(const Constellation& c, const std::string& out, const std::string& csv) {
  io::write_file(out, io::write_constellation(c));
  if (!csv.empty()) io::write_file(csv, io::write_constellation_angles_csv(c));
  const ValidityReport rep = validate(c);
  report_stream(out) << io::format_report(rep);
  return rep.allowed ? exit_ok : exit_degenerate;
}

struct Options {
  int threads = 1;
  int two_s = 1;
  std::string out = "-";
  std::string csv;
  std::uint64_t seed = 0;
  std::string angles;
  std::string offsets;
  std::vector<std::string> cones;
  std::string z0;
  std::string constellation;
  std::string op;
  std::string variant = "lower";
  std::string method = "gram";
  std::string probabilities;
  std::string a, b;
  bool project = false;
  std::string kernel = "wigner";
  std::string eps;
  int n_theta = 32;
  int n_phi = 64;
};

KernelPair load_kernel(const Options& o) {
  return dual_kernel(io::read_constellation(io::read_file(o.constellation)), parse_dual_method(o.method));
}

int run_validate(const Options& o) {
  const Constellation c = io::read_constellation(io::read_file(o.constellation));
  const ValidityReport rep = validate(c);
  std::cout << io::format_report(rep);
  if (c.spin().two_s() == 1) {
    const auto deg = spinhalf::degeneracy_test(c);
    std::cout << "tetrahedron_volume: " << deg.volume << "\nconcyclic: " << (deg.forbidden ? "true" : "false") << "\n";
  }
  return rep.allowed ? exit_ok : exit_degenerate;
}

int run_symbol(const Options& o) {
  const KernelPair kp = load_kernel(o);
  const Operator a = io::read_operator(io::read_file(o.op));
  if (!(a.spin() == kp.spin())) throw io::FormatError("operator and constellation have different spin");
  SymbolVariant v;
  if (o.variant == "lower")
    v = SymbolVariant::lower;
  else if (o.variant == "upper")
    v = SymbolVariant::upper;
  else
    throw io::FormatError("--variant must be lower or upper");
  io::write_file(o.out, io::write_symbol_csv(discrete_symbol(a, kp, v)));
  if (kp.ill_conditioned()) std::cerr << "warning: Gram condition number " << kp.condition() << "\n";
  return exit_ok;
}

int run_dual(const Options& o) {
  const std::string bytes = io::read_file(o.constellation);
  const KernelPair kp = dual_kernel(io::read_constellation(bytes), parse_dual_method(o.method));
  io::write_file(o.out, io::write_kernel_export(kp, o.constellation, io::sha256_hex(bytes)));
  return exit_ok;
}

int run_reconstruct(const Options& o) {
  const KernelPair kp = load_kernel(o);
  const Symbol p = io::to_symbol(io::read_symbol_csv(io::read_file(o.probabilities)), kp.spin(), kp.id());
  if (p.variant != SymbolVariant::lower) throw io::FormatError("probabilities must be a lower (nu,p) table");
  const Reconstruction r = reconstruct(p, kp, {o.project});
  if (r.min_eigenvalue < -1e-10)
    std::cerr << "warning: linear estimate has negative eigenvalue " << r.min_eigenvalue
              << (r.projected ? " (projected onto density matrices)" : "") << "\n";
  io::write_file(o.out, io::write_operator(r.rho));
  return exit_ok;
}

int run_star(const Options& o) {
  const KernelPair kp = load_kernel(o);
  const Symbol a = io::to_symbol(io::read_symbol_csv(io::read_file(o.a)), kp.spin(), kp.id());
  const Symbol b = io::to_symbol(io::read_symbol_csv(io::read_file(o.b)), kp.spin(), kp.id());
  if (a.variant != SymbolVariant::lower || b.variant != SymbolVariant::lower)
    throw io::FormatError("star operands must be lower (nu,value) symbols");
  io::write_file(o.out, io::write_symbol_csv(star_product(a, b, kp, effective_threads(o.threads))));
  return exit_ok;
}

int run_wigner(const Options& o) {
  const Operator a = io::read_operator(io::read_file(o.op));
  const SpinJ s = a.spin();
  KernelCoefficients coeffs = selfdual_coeffs(s);
  KernelSide side = KernelSide::lower;
  if (o.kernel == "wigner") {
    if (!o.eps.empty()) {
      std::vector<int> eps;
      for (const auto& item : split(o.eps, ',')) {
        const double v = io::parse_angle(item);
        if (v != 1.0 && v != -1.0) throw io::FormatError("--eps entries must be +1 or -1");
        eps.push_back(static_cast<int>(v));
      }
      coeffs = selfdual_coeffs(s, EpsilonSigns(s, eps));
    }
  } else if (o.kernel == "q" || o.kernel == "p") {
    coeffs = pq_coeffs(s);
    side = o.kernel == "q" ? KernelSide::lower : KernelSide::upper;
  } else {
    throw io::FormatError("--kernel must be wigner, q or p");
  }
  const auto grid = symbol_grid(a, coeffs, side, o.n_theta, o.n_phi, effective_threads(o.threads));
  io::write_file(o.out, io::write_grid_csv(s, grid));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{std::string(io::tool_version) + ": discrete and continuous phase-space symbols for spin s"};
  app.set_version_flag("--version", io::tool_version);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker threads (MOYAL_SPIN_THREADS overrides)");

  auto* gen = app.add_subcommand("gen", "Generate a constellation");
  gen->require_subcommand(1);
  gen->fallthrough();
  auto common_gen = [&](CLI::App* sub) {
    sub->add_option("--two-s", o.two_s, "Twice the spin")->required()->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Constellation JSON output ('-' for stdout)");
    sub->add_option("--csv", o.csv, "Optional (theta, phi) CSV export");
  };
  auto* g_random = gen->add_subcommand("random", "Uniform random points");
  common_gen(g_random);
  g_random->add_option("--seed", o.seed, "Generator seed");
  auto* g_nested = gen->add_subcommand("nested", "Nested cones about the z axis");
  common_gen(g_nested);
  g_nested->add_option("--angles", o.angles, "Comma-separated opening angles (rad or NNdeg)")->required();
  g_nested->add_option("--offsets", o.offsets, "Comma-separated meridian offsets");
  auto* g_free = gen->add_subcommand("free", "Freely oriented cones");
  common_gen(g_free);
  g_free->add_option("--cone", o.cones, "Cone 'ax,ay,az;angle;count[;offset]' (repeatable)")->required();
  auto* g_spiral = gen->add_subcommand("spiral", "Spiral z_nu = z0^(nu-1)");
  common_gen(g_spiral);
  g_spiral->add_option("--z0", o.z0, "Complex ratio, 'r@deg' or 'a+bi'")->required();

  auto add_kernel_opts = [&](CLI::App* sub) {
    sub->add_option("--constellation", o.constellation, "Constellation JSON")->required();
    sub->add_option("--method", o.method, "Dual kernel method: gram, factorized, vandermonde");
    sub->add_option("--out", o.out, "Output file ('-' for stdout)");
  };
  auto* validate_cmd = app.add_subcommand("validate", "Report constellation validity");
  validate_cmd->add_option("--constellation", o.constellation, "Constellation JSON")->required();
  auto* symbol_cmd = app.add_subcommand("symbol", "Discrete symbol of an operator");
  add_kernel_opts(symbol_cmd);
  symbol_cmd->add_option("--operator", o.op, "Operator JSON")->required();
  symbol_cmd->add_option("--variant", o.variant, "lower or upper");
  auto* dual_cmd = app.add_subcommand("dual", "Export the dual kernel");
  add_kernel_opts(dual_cmd);
  auto* rec_cmd = app.add_subcommand("reconstruct", "Density matrix from probabilities");
  add_kernel_opts(rec_cmd);
  rec_cmd->add_option("--probabilities", o.probabilities, "Probability CSV (nu,p)")->required();
  rec_cmd->add_flag("--project", o.project, "Clip negative eigenvalues and renormalize");
  auto* star_cmd = app.add_subcommand("star", "Discrete star product of two lower symbols");
  add_kernel_opts(star_cmd);
  star_cmd->add_option("--a", o.a, "Left symbol CSV")->required();
  star_cmd->add_option("--b", o.b, "Right symbol CSV")->required();
  auto* wig_cmd = app.add_subcommand("wigner", "Continuous symbol on a (theta, phi) grid");
  wig_cmd->add_option("--operator", o.op, "Operator JSON")->required();
  wig_cmd->add_option("--kernel", o.kernel, "wigner, q or p");
  wig_cmd->add_option("--eps", o.eps, "Comma-separated signs eps_0..eps_2s for the Wigner kernel");
  wig_cmd->add_option("--n-theta", o.n_theta, "Polar grid size")->check(CLI::PositiveNumber);
  wig_cmd->add_option("--n-phi", o.n_phi, "Azimuthal grid size")->check(CLI::PositiveNumber);
  wig_cmd->add_option("--out", o.out, "Grid CSV output ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    const SpinJ s(o.two_s);
    if (g_random->parsed()) return emit_constellation(random_constellation(s, o.seed), o.out, o.csv);
    if (g_nested->parsed()) {
      const auto angles = parse_angle_list(o.angles);
      if (o.offsets.empty()) return emit_constellation(nested_cones(s, angles), o.out, o.csv);
      return emit_constellation(nested_cones(s, angles, parse_angle_list(o.offsets)), o.out, o.csv);
    }
    if (g_free->parsed()) {
      std::vector<ConeSpec> specs;
      for (const auto& c : o.cones) specs.push_back(parse_cone(c));
      return emit_constellation(free_cones(s, specs), o.out, o.csv);
    }
    if (g_spiral->parsed()) return emit_constellation(spiral(s, io::parse_complex(o.z0)), o.out, o.csv);
    if (validate_cmd->parsed()) return run_validate(o);
    if (symbol_cmd->parsed()) return run_symbol(o);
    if (dual_cmd->parsed()) return run_dual(o);
    if (rec_cmd->parsed()) return run_reconstruct(o);
    if (star_cmd->parsed()) return run_star(o);
    if (wig_cmd->parsed()) return run_wigner(o);
  } catch (const SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_degenerate;
  } catch (const DegenerateConstellationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_degenerate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_invalid;
}
