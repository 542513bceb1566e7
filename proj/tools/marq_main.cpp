// marq — command-line evaluator for the Marcum Q integral families and the
// energy-detection / CIFR-capacity curves built on them.
//
// Exit codes: 0 success, 2 domain error, 3 convergence failure,
// 64 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "marq/applications.hpp"
#include "marq/quadrature.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitUsage = 64;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("list", "bad number: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("list", "empty list");
  return out;
}

struct GridSpec {
  std::string kind;  // "log" or "lin"
  double lo = 0.0, hi = 0.0;
  int count = 0;
};

GridSpec parse_grid(const std::string& s, const std::string& want_kind) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4 || parts[0] != want_kind)
    throw CLI::ValidationError("grid", "expected " + want_kind + ":<min>:<max>:<count>");
  GridSpec g;
  g.kind = parts[0];
  try {
    g.lo = std::stod(parts[1]);
    g.hi = std::stod(parts[2]);
    g.count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("grid", "bad grid numbers in " + s);
  }
  return g;
}

std::vector<double> expand_grid(const GridSpec& g) {
  if (g.count < 1) throw marq::domain_error("grid: count must be >= 1");
  if (!(g.lo <= g.hi)) throw marq::domain_error("grid: min must be <= max");
  std::vector<double> out;
  out.reserve(g.count);
  if (g.count == 1) {
    out.push_back(g.lo);
    return out;
  }
  if (g.kind == "log") {
    if (!(g.lo > 0.0)) throw marq::domain_error("grid: log grid requires min > 0");
    const double l0 = std::log(g.lo), l1 = std::log(g.hi);
    for (int i = 0; i < g.count; ++i)
      out.push_back(std::exp(l0 + (l1 - l0) * i / (g.count - 1)));
  } else {
    for (int i = 0; i < g.count; ++i)
      out.push_back(g.lo + (g.hi - g.lo) * i / (g.count - 1));
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw marq::domain_error("cannot open output file: " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << fmt17(row[i]);
    }
    out << '\n';
  }
}

struct EvalArgs {
  std::string family;
  double k = 0, m = 0, a = 0, b = 0, p = 0;
  std::string method = "auto";
  double tol = 1e-10;
};

int run_eval(const EvalArgs& args) {
  const marq::Family fam = args.family == "g" ? marq::Family::G : marq::Family::F;
  const marq::IntegralSpec spec{fam, args.k, args.m, args.a, args.b, args.p};
  spec.validate();
  marq::EvalOptions opts;
  opts.oracle_tol = args.tol;

  marq::EvalOutcome out;
  if (args.method == "auto") {
    out = marq::eval_integral(spec, opts);
  } else {
    marq::Method method = marq::Method::Oracle;
    if (args.method == "thm1") method = marq::Method::Thm1;
    else if (args.method == "thm2") method = marq::Method::Thm2;
    else if (args.method == "eq15") method = marq::Method::Eq15;
    else if (args.method == "thm3") method = marq::Method::Thm3;
    out = marq::eval_with_method(spec, method, opts);
  }
  std::printf("value=%s method=%s err=%.3g\n", fmt17(out.value).c_str(),
              marq::to_string(out.method), out.err_estimate);
  return kExitOk;
}

struct RocArgs {
  double u = 0;
  double snr_db = 0;
  std::string m_list;
  std::string pf_grid;
  std::string out_path;
};

int run_roc(const RocArgs& args) {
  const std::vector<double> ms = parse_list(args.m_list);
  const GridSpec g = parse_grid(args.pf_grid, "log");
  if (!(g.lo > 0.0 && g.hi < 1.0))
    throw marq::domain_error("roc: pf bounds must lie in (0,1)");
  const std::vector<double> pfs = expand_grid(g);
  const double gbar = std::pow(10.0, args.snr_db / 10.0);

  std::vector<std::string> header{"pf"};
  for (double m : ms) {
    header.push_back("lambda_m" + fmt_label(m));
    header.push_back("pmd_m" + fmt_label(m));
  }
  std::vector<std::vector<double>> rows;
  for (double pf : pfs) {
    std::vector<double> row{pf};
    const double lambda = marq::threshold_for_pf(args.u, pf);
    for (double m : ms) {
      const double pd =
          marq::avg_prob_detection({m, gbar}, {args.u, lambda});
      row.push_back(lambda);
      row.push_back(1.0 - pd);
    }
    rows.push_back(std::move(row));
  }
  write_csv(args.out_path, header, rows);
  return kExitOk;
}

struct CifrArgs {
  std::string m_list;
  std::string snr_grid;
  double gamma_t_db = 0;
  double rho = 0;
  double bandwidth = 1.0;
  bool corrected = false;
  std::string out_path;
};

int run_cifr(const CifrArgs& args) {
  const std::vector<double> ms = parse_list(args.m_list);
  for (double m : ms)
    if (!(m > 1.0))
      throw marq::domain_error(
          "cifr: every m must exceed 1 (the embedded integral requires k = m-1 > 0)");
  const std::vector<double> dbs = expand_grid(parse_grid(args.snr_grid, "lin"));
  const marq::SscDiversity ssc{args.rho, std::pow(10.0, args.gamma_t_db / 10.0)};
  ssc.validate();
  if (args.rho > 0.999)
    std::cerr << "warning: rho close to 1; arguments grow like (1-rho)^{-1/2}\n";

  std::vector<std::string> header{"snr_db"};
  for (double m : ms) header.push_back("se_m" + fmt_label(m));
  std::vector<std::vector<double>> rows;
  for (double db : dbs) {
    std::vector<double> row{db};
    for (double m : ms) {
      const marq::NakagamiChannel ch{m, std::pow(10.0, db / 10.0)};
      row.push_back(marq::cifr_capacity(args.bandwidth, ch, ssc, args.corrected));
    }
    rows.push_back(std::move(row));
  }
  write_csv(args.out_path, header, rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form and quadrature evaluation of the Marcum Q integral "
               "families, with energy-detection ROC and SSC/CIFR capacity curves"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one integral");
  eval->add_option("--family", eval_args.family, "g or f")
      ->required()
      ->check(CLI::IsMember({"g", "f"}));
  eval->add_option("--k", eval_args.k)->required();
  eval->add_option("--m", eval_args.m)->required();
  eval->add_option("--a", eval_args.a)->required();
  eval->add_option("--b", eval_args.b)->required();
  eval->add_option("--p", eval_args.p)->required();
  eval->add_option("--method", eval_args.method, "evaluation path (default auto)")
      ->check(CLI::IsMember({"auto", "thm1", "thm2", "eq15", "thm3", "oracle"}));
  eval->add_option("--tol", eval_args.tol, "quadrature absolute tolerance");

  RocArgs roc_args;
  CLI::App* roc = app.add_subcommand("roc", "energy-detection ROC curve CSV");
  roc->add_option("--u", roc_args.u, "time-bandwidth product")->required();
  roc->add_option("--snr-db", roc_args.snr_db, "average SNR in dB")->required();
  roc->add_option("--m", roc_args.m_list, "fading figures, comma separated")->required();
  roc->add_option("--pf", roc_args.pf_grid, "log:<min>:<max>:<count>")->required();
  roc->add_option("--out", roc_args.out_path, "output CSV path")->required();

  CifrArgs cifr_args;
  CLI::App* cifr = app.add_subcommand("cifr", "CIFR capacity curve CSV");
  cifr->add_option("--m", cifr_args.m_list, "fading figures, comma separated")->required();
  cifr->add_option("--snr-db", cifr_args.snr_grid, "lin:<min>:<max>:<count>")->required();
  cifr->add_option("--gamma-t-db", cifr_args.gamma_t_db, "switching threshold in dB")
      ->required();
  cifr->add_option("--rho", cifr_args.rho, "branch correlation in [0,1)")->required();
  cifr->add_option("--bandwidth", cifr_args.bandwidth, "bandwidth (default 1)");
  cifr->add_flag("--ssc-corrected", cifr_args.corrected,
                 "add the full-range E[1/gamma] term missing from the printed form");
  cifr->add_option("--out", cifr_args.out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(eval)) return run_eval(eval_args);
    if (app.got_subcommand(roc)) return run_roc(roc_args);
    return run_cifr(cifr_args);
  } catch (const marq::nonphysical_error& e) {
    std::cerr << "error: " << e.what() << " (value " << e.offending_value() << ")\n";
    return kExitDomain;
  } catch (const marq::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const marq::no_convergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const marq::quadrature_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }
}
