#pragma once

// Command-line front end. Exit codes: 0 ok / certified, 1 violation or gap
// over tolerance, 2 input error, 3 unbounded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cwm/caseproof.hpp"
#include "cwm/duality.hpp"
#include "cwm/encoders.hpp"
#include "cwm/io.hpp"
#include "cwm/model.hpp"
#include "cwm/oracle.hpp"
#include "cwm/solver.hpp"

namespace cwm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUnbounded = 3;

struct RunReport {
  std::string instance;
  std::string termination;
  std::size_t sweeps = 0;
  double primal = 0.0;
  std::optional<double> dual;
  std::optional<double> gap;
  std::optional<bool> verdict;
  std::optional<double> oracle;
  std::optional<double> rd;
  double seconds = 0.0;
};

inline double relative_difference(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

inline const char* kCsvHeader = "instance,termination,sweeps,primal,dual,gap,verdict,oracle,rd,seconds";

inline void write_csv_row(std::ostream& os, const RunReport& r) {
  auto opt = [&](const std::optional<double>& x) {
    if (x) os << io::format_double(*x);
  };
  os << r.instance << ',' << r.termination << ',' << r.sweeps << ',' << io::format_double(r.primal)
     << ',';
  opt(r.dual);
  os << ',';
  opt(r.gap);
  os << ',';
  if (r.verdict) os << (*r.verdict ? "true" : "false");
  os << ',';
  opt(r.oracle);
  os << ',';
  opt(r.rd);
  os << ',' << io::format_double(r.seconds) << '\n';
}

inline void write_text_report(std::ostream& os, const RunReport& r) {
  os << "instance: " << r.instance << '\n';
  os << "termination: " << r.termination << '\n';
  os << "sweeps: " << r.sweeps << '\n';
  os << "objective: " << io::format_double(r.primal) << '\n';
  if (r.dual) os << "dual: " << io::format_double(*r.dual) << '\n';
  if (r.gap) os << "gap: " << io::format_double(*r.gap) << '\n';
  if (r.verdict) os << "verdict: " << (*r.verdict ? "certified" : "not certified") << '\n';
  if (r.oracle) os << "oracle: " << io::format_double(*r.oracle) << '\n';
  if (r.rd) os << "rd: " << io::format_double(*r.rd) << '\n';
}

namespace detail {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

inline ProblemSpec load_spec(const std::string& path) {
  auto in = open_input(path);
  ProblemSpec spec = [&] {
    try {
      return io::read_spec(in);
    } catch (const io::ParseError& e) {
      throw InputError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(path + ": " + e.what());
    }
  }();
  const ValidationReport report = validate_spec(spec);
  if (!report.valid()) {
    std::string msg = path + ": invalid spec";
    for (const Violation& v : report.violations) {
      msg += "\n  " + std::string(to_string(v.kind)) + " at " + v.location;
      if (!v.detail.empty()) msg += " (" + v.detail + ")";
    }
    throw InputError(msg);
  }
  return spec;
}

struct Timed {
  SolveResult result;
  double seconds = 0.0;
};

inline Timed timed_solve(const ProblemSpec& spec, const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Timed t{solve(spec, config), 0.0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

}  // namespace detail

struct Options {
  SolverConfig solver;
  double tol_eq = kDefaultTolEq;
  double tol = 1e-6;
  std::string format = "text";
};

inline int cmd_solve(const std::string& path, const Options& opt, bool print_point,
                     std::ostream& out) {
  const ProblemSpec spec = detail::load_spec(path);
  const auto run = detail::timed_solve(spec, opt.solver);
  RunReport report;
  report.instance = path;
  report.termination = to_string(run.result.termination);
  report.sweeps = run.result.sweeps;
  report.primal = run.result.objective_value;
  report.seconds = run.seconds;
  if (opt.format == "csv") {
    out << kCsvHeader << '\n';
    write_csv_row(out, report);
  } else {
    write_text_report(out, report);
    if (print_point) {
      for (std::size_t i = 0; i < spec.m(); ++i) {
        out << "phi " << i << ' ' << io::format_double(run.result.phi[i]) << '\n';
      }
      for (std::size_t i = 0; i < spec.n(); ++i) {
        out << "lam " << i << ' ' << io::format_double(run.result.lam[i]) << '\n';
      }
    }
  }
  return run.result.termination == Termination::kUnbounded ? kExitUnbounded : kExitOk;
}

inline int cmd_certify(const std::string& path, const Options& opt, const std::string& cert_out,
                       std::ostream& out) {
  const ProblemSpec spec = detail::load_spec(path);
  const auto run = detail::timed_solve(spec, opt.solver);
  RunReport report;
  report.instance = path;
  report.termination = to_string(run.result.termination);
  report.sweeps = run.result.sweeps;
  report.primal = run.result.objective_value;
  report.seconds = run.seconds;
  if (run.result.termination == Termination::kUnbounded) {
    if (opt.format == "csv") {
      out << kCsvHeader << '\n';
      write_csv_row(out, report);
    } else {
      write_text_report(out, report);
    }
    return kExitUnbounded;
  }
  const DualCertificate cert = build_certificate(spec, run.result.phi, run.result.lam, opt.tol_eq);
  const CertificateReport check = verify(spec, run.result.phi, run.result.lam, cert, opt.tol);
  report.dual = check.dual;
  report.gap = check.gap;
  report.verdict = check.verdict;
  if (!cert_out.empty()) {
    std::ofstream os(cert_out);
    if (!os) throw detail::InputError("cannot write " + cert_out);
    io::write_certificate(os, run.result.phi, run.result.lam, cert);
  }
  if (opt.format == "csv") {
    out << kCsvHeader << '\n';
    write_csv_row(out, report);
  } else {
    write_text_report(out, report);
    out << "interior: " << (cert.precondition_met ? "yes" : "no") << '\n';
    out << "max residual phi: " << io::format_double(check.max_eq_residual_phi) << '\n';
    out << "max residual lambda: " << io::format_double(check.max_eq_residual_lambda) << '\n';
    out << "range violations: " << check.range_violations.size() << '\n';
    out << "slackness violations: " << check.cs_violations.size() << '\n';
    for (const auto& v : check.range_violations) {
      out << "  range " << v.variable << " = " << io::format_double(v.value) << '\n';
    }
    for (const auto& v : check.cs_violations) {
      out << "  slackness " << v.constraint << " = " << io::format_double(v.product) << '\n';
    }
    const GuaranteeReport g = check_guarantee(spec);
    out << "guarantee conditions: " << (g.satisfied() ? "satisfied" : "violated") << '\n';
  }
  return check.verdict ? kExitOk : kExitViolation;
}

inline int cmd_encode(const std::string& kind, const std::string& in_path,
                      const std::string& out_path, bool min_ones, std::ostream& out) {
  auto in = detail::open_input(in_path);
  EncodedInstance inst = [&] {
    try {
      if (kind == "maxsat") return encode_maxsat(io::read_wcnf(in), {min_ones});
      if (kind == "vc") return encode_vertex_cover(io::read_vertex_cover(in));
      if (kind == "maxflow") return encode_maxflow(io::read_dimacs_flow(in));
      return encode_potts(io::read_potts(in));
    } catch (const io::ParseError& e) {
      throw detail::InputError(in_path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw detail::InputError(in_path + ": " + e.what());
    }
  }();
  std::ofstream os(out_path);
  if (!os) throw detail::InputError("cannot write " + out_path);
  os << "# encoded " << to_string(inst.kind) << " instance from " << in_path << '\n';
  os << "# application value = " << io::format_double(inst.transform.sign) << " * objective + "
     << io::format_double(inst.transform.offset) << '\n';
  io::write_spec(os, inst.spec);

  const GuaranteeReport g = check_guarantee(inst.spec);
  out << "kind: " << to_string(inst.kind) << '\n';
  out << "dims: " << inst.spec.m() << ' ' << inst.spec.n() << ' ' << inst.spec.p() << '\n';
  out << "transform: sign " << io::format_double(inst.transform.sign) << " offset "
      << io::format_double(inst.transform.offset) << '\n';
  out << "guarantee conditions: "
      << (g.satisfied() ? "satisfied" : std::to_string(g.violations.size()) + " violations")
      << '\n';
  return kExitOk;
}

inline int cmd_prove_cases(unsigned threads, const Options& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const caseproof::ProofReport report = caseproof::run_case_proof(threads);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto family = [&](const char* name, const caseproof::FamilyReport& f) {
    if (opt.format == "csv") {
      out << name << ',' << f.total << ',' << f.holds << ',' << f.skipped << ',' << f.violated
          << '\n';
      return;
    }
    out << name << ": total " << f.total << ", holds " << f.holds << ", skipped " << f.skipped
        << ", violated " << f.violated << '\n';
    if (f.first_violation) {
      const auto& c = *f.first_violation;
      out << "  first violation: lo " << (c.lo ? std::to_string(*c.lo) : "-inf") << " hi "
          << (c.hi ? std::to_string(*c.hi) : "inf") << " w " << (c.w ? std::to_string(*c.w) : "-")
          << " coeff " << c.coeff[0] << ' ' << c.coeff[1] << " breakpoints " << c.breakpoint[0]
          << ' ' << c.breakpoint[1] << " slope " << c.slope << '\n';
    }
  };
  if (opt.format == "csv") out << "family,total,holds,skipped,violated\n";
  family("phi", report.phi);
  family("lambda", report.lambda);
  if (opt.format != "csv") {
    out << "violated: " << report.phi.violated + report.lambda.violated << '\n';
    out << "seconds: " << std::fixed << std::setprecision(3) << seconds << '\n';
    out << std::defaultfloat;
  }
  return report.ok() ? kExitOk : kExitViolation;
}

inline int cmd_oracle(const std::string& path, std::size_t size_limit, const Options& opt,
                      std::ostream& out) {
  const ProblemSpec spec = detail::load_spec(path);
  oracle::ExactLpResult result;
  try {
    result = oracle::lp_solve_exact(spec, size_limit);
  } catch (const oracle::LpError& e) {
    if (std::string(e.what()).find("unbounded") != std::string::npos) {
      out << "unbounded\n";
      return kExitUnbounded;
    }
    throw detail::InputError(e.what());
  }
  if (opt.format == "csv") {
    out << "instance,value,exact,pivots\n";
    out << path << ',' << io::format_double(result.value) << ',' << result.exact.get_str() << ','
        << result.pivots << '\n';
  } else {
    out << "value: " << io::format_double(result.value) << '\n';
    out << "exact: " << result.exact.get_str() << '\n';
    out << "pivots: " << result.pivots << '\n';
  }
  return kExitOk;
}

// Every *.cwm file in the directory, in name order.
inline int cmd_bench(const std::string& dir, std::size_t size_limit, const Options& opt,
                     std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw detail::InputError(dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cwm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<RunReport> reports;
  std::vector<double> rds;
  std::size_t certified = 0;
  if (opt.format == "csv") out << kCsvHeader << '\n';
  for (const fs::path& file : files) {
    const ProblemSpec spec = detail::load_spec(file.string());
    const auto run = detail::timed_solve(spec, opt.solver);
    RunReport r;
    r.instance = file.filename().string();
    r.termination = to_string(run.result.termination);
    r.sweeps = run.result.sweeps;
    r.primal = run.result.objective_value;
    r.seconds = run.seconds;
    if (run.result.termination != Termination::kUnbounded) {
      const auto cert = build_certificate(spec, run.result.phi, run.result.lam, opt.tol_eq);
      const auto check = verify(spec, run.result.phi, run.result.lam, cert, opt.tol);
      r.dual = check.dual;
      r.gap = check.gap;
      r.verdict = check.verdict;
      certified += check.verdict ? 1 : 0;
      if (spec.m() + spec.n() + spec.p() <= size_limit) {
        try {
          r.oracle = oracle::lp_solve_exact(spec, size_limit).value;
          r.rd = relative_difference(r.primal, *r.oracle);
          rds.push_back(*r.rd);
        } catch (const oracle::LpError&) {
        }
      }
    }
    if (opt.format == "csv") {
      write_csv_row(out, r);
    } else {
      out << r.instance << ": " << r.termination << ", sweeps " << r.sweeps << ", objective "
          << io::format_double(r.primal);
      if (r.gap) out << ", gap " << io::format_double(*r.gap);
      if (r.verdict) out << (*r.verdict ? ", certified" : ", not certified");
      if (r.rd) out << ", rd " << io::format_double(*r.rd);
      out << '\n';
    }
    reports.push_back(std::move(r));
  }

  double mean = 0.0;
  for (double x : rds) mean += x;
  if (!rds.empty()) mean /= static_cast<double>(rds.size());
  std::ostream& summary = opt.format == "csv" ? err : out;
  summary << "instances: " << reports.size() << '\n';
  summary << "certified: " << certified << '\n';
  summary << "with oracle: " << rds.size() << '\n';
  summary << "mean rd: " << io::format_double(mean) << '\n';
  summary << "median rd: " << io::format_double(detail::median(rds)) << '\n';
  return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coordinate-wise minimization for hinge-sum linear programs"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--eps", opt.solver.eps, "minimum objective improvement per sweep")
      ->capture_default_str();
  app.add_option("--delta", opt.solver.delta, "step past the finite end of a half line")
      ->capture_default_str();
  app.add_option("--max-sweeps", opt.solver.max_sweeps, "sweep limit")->capture_default_str();
  app.add_option("--tol-eq", opt.tol_eq, "activity tolerance when building certificates")
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "tolerance for certificate verification")
      ->capture_default_str();
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  std::string path, kind, in_path, out_path, cert_out;
  bool print_point = false, min_ones = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t size_limit = oracle::kDefaultSizeLimit;

  auto* solve_cmd = app.add_subcommand("solve", "run the solver on a spec file");
  solve_cmd->add_option("spec", path, "spec file")->required();
  solve_cmd->add_flag("--print-point", print_point, "print the final phi and lambda");

  auto* certify_cmd = app.add_subcommand("certify", "solve and verify a dual certificate");
  certify_cmd->add_option("spec", path, "spec file")->required();
  certify_cmd->add_option("--cert-out", cert_out, "write the certificate to this file");

  auto* encode_cmd = app.add_subcommand("encode", "encode an application instance");
  encode_cmd->add_option("kind", kind, "problem kind")
      ->required()
      ->check(CLI::IsMember({"maxsat", "vc", "maxflow", "potts"}));
  encode_cmd->add_option("input", in_path, "application input file")->required();
  encode_cmd->add_option("-o,--output", out_path, "output spec file")->required();
  encode_cmd->add_flag("--min-ones", min_ones, "Min-Ones variant (hard clauses only)");

  auto* prove_cmd = app.add_subcommand("prove-cases", "run the exhaustive case analysis");
  prove_cmd->add_option("--threads", threads, "worker threads");

  auto* oracle_cmd = app.add_subcommand("oracle", "solve a spec exactly with rational simplex");
  oracle_cmd->add_option("spec", path, "spec file")->required();
  oracle_cmd->add_option("--size-limit", size_limit, "largest m + n + p accepted")
      ->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "solve every .cwm file in a directory");
  bench_cmd->add_option("dir", path, "instance directory")->required();
  bench_cmd->add_option("--size-limit", size_limit, "largest m + n + p sent to the oracle")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    opt.solver.check();
    if (!(opt.tol_eq >= 0.0) || !(opt.tol >= 0.0)) {
      throw detail::InputError("tolerances must be non-negative");
    }
    if (*solve_cmd) return cmd_solve(path, opt, print_point, out);
    if (*certify_cmd) return cmd_certify(path, opt, cert_out, out);
    if (*encode_cmd) return cmd_encode(kind, in_path, out_path, min_ones, out);
    if (*prove_cmd) return cmd_prove_cases(threads, opt, out);
    if (*oracle_cmd) return cmd_oracle(path, size_limit, opt, out);
    if (*bench_cmd) return cmd_bench(path, size_limit, opt, out, err);
  } catch (const detail::InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace cwm::cli
