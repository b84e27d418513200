// qpm_cli.cpp
// Command-line front end: observable decomposition, measurement
// experiments, and CHSH reports with machine-readable output.
//
// Exit codes: 0 success, 2 input/usage error, 3 domain validation error,
// 4 internal numerical-integrity error. Data goes to stdout only,
// diagnostics to stderr only.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpm/qpm.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qpm::SchemaError("cannot open input file: " + path);
  return nlohmann::json::parse(in);
}

std::string num(double v) {
  std::ostringstream os;
  qpm::write_json_number(os, v);
  return os.str();
}

void emit_json(const qpm::Json& j) {
  qpm::write_json(std::cout, j);
  std::cout << '\n';
}

int run_decompose(const std::string& input, const std::string& format) {
  const qpm::CMatrix a = qpm::matrix_from_json(load_json(input));
  if (!a.square()) {
    throw qpm::SchemaError("decompose expects a square matrix, got " + a.shape());
  }
  if (!qpm::classify(a).hermitian) {
    throw qpm::ValidationError(
        "observable is not hermitian: ||a - a^dagger||_F = " +
        num(qpm::frobenius_distance(a, qpm::adjoint(a))));
  }
  const qpm::ProjectiveMeasurement m = qpm::make_pm(a);
  const double residual = qpm::frobenius_distance(qpm::reconstruct(m), a);

  if (format == "json") {
    qpm::Json j;
    j["measurement"] = qpm::measurement_to_json(m);
    j["residual"] = residual;
    emit_json(j);
  } else if (format == "csv") {
    std::cout << "value,multiplicity,residual\n";
    for (const qpm::MeasureOutcome& o : m.outcomes()) {
      const double mult = qpm::trace(o.proj).real();
      std::cout << num(o.value) << ',' << num(std::round(mult)) << ','
                << num(residual) << '\n';
    }
  } else {
    std::cout << "projective measurement: dim " << m.dim() << ", " << m.size()
              << " outcome(s)\n";
    for (const qpm::MeasureOutcome& o : m.outcomes()) {
      std::cout << "  value " << num(o.value) << "  multiplicity "
                << num(std::round(qpm::trace(o.proj).real())) << '\n';
    }
    std::cout << "reconstruction residual: " << num(residual) << '\n';
  }
  return 0;
}

int run_measure(const std::string& state_path, const std::string& obs_path,
                const std::string& format) {
  const qpm::DensityOperator rho = qpm::density_from_json(load_json(state_path));
  const qpm::CMatrix obs = qpm::matrix_from_json(load_json(obs_path));
  if (!obs.square()) {
    throw qpm::SchemaError("observable must be a square matrix, got " + obs.shape());
  }
  const qpm::ProjectiveMeasurement m = qpm::make_pm(obs);
  if (rho.dim() != m.dim()) {
    throw qpm::DimensionError("state dimension " + std::to_string(rho.dim()) +
                              " does not match observable dimension " +
                              std::to_string(m.dim()));
  }

  std::vector<double> probs(m.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    probs[i] = qpm::outcome_prob(rho, m, i);
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw qpm::NumericalError("outcome probabilities sum to " + num(sum));
  }

  if (format == "json") {
    qpm::Json arr = qpm::Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      qpm::Json jo;
      jo["value"] = m[i].value;
      jo["probability"] = probs[i];
      jo["collapsed"] = qpm::density_to_json(qpm::collapse(rho, m[i].proj));
      arr.push_back(std::move(jo));
    }
    emit_json(arr);
  } else if (format == "csv") {
    std::cout << "value,probability\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      std::cout << num(m[i].value) << ',' << num(probs[i]) << '\n';
    }
  } else {
    std::cout << "outcome distribution (" << m.size() << " outcome(s)):\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      std::cout << "  value " << num(m[i].value) << "  probability " << num(probs[i])
                << '\n';
    }
  }
  return 0;
}

void print_report_human(const qpm::CorrelationReport& r) {
  std::cout << "CHSH correlations:\n"
            << "  E(ZI, IXpZ) = " << num(r.zi_ixpz) << '\n'
            << "  E(XI, IXpZ) = " << num(r.xi_ixpz) << '\n'
            << "  E(XI, IZmX) = " << num(r.xi_izmx) << '\n'
            << "  E(ZI, IZmX) = " << num(r.zi_izmx) << '\n'
            << "S = " << num(r.s) << "  (classical bound 2)\n";
}

int run_chsh_quantum(const std::string& format) {
  const qpm::DensityOperator rho_c(qpm::rank1proj(qpm::bell_state(qpm::BellKind::PsiMinus)));
  const qpm::CorrelationReport r = qpm::chsh_quantum(rho_c);
  if (format == "json") {
    emit_json(qpm::report_to_json(r));
  } else if (format == "csv") {
    std::cout << "zi_ixpz,xi_ixpz,xi_izmx,zi_izmx,s,classical_bound,violated\n"
              << num(r.zi_ixpz) << ',' << num(r.xi_ixpz) << ',' << num(r.xi_izmx) << ','
              << num(r.zi_izmx) << ',' << num(r.s) << ",2,"
              << (std::abs(r.s) > 2.0 ? "true" : "false") << '\n';
  } else {
    print_report_human(r);
    std::cout << (std::abs(r.s) > 2.0 ? "violated\n" : "not violated\n");
  }
  return 0;
}

int run_chsh_lhv(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                 const std::string& format) {
  const double max_s = qpm::monte_carlo_lhv(trials, seed, workers);
  const double det_max = qpm::max_deterministic_chsh();
  if (format == "json") {
    qpm::Json j;
    j["trials"] = trials;
    j["seed"] = seed;
    j["max_abs_s"] = max_s;
    j["deterministic_max"] = det_max;
    emit_json(j);
  } else if (format == "csv") {
    std::cout << "trials,seed,max_abs_s,deterministic_max\n"
              << trials << ',' << seed << ',' << num(max_s) << ',' << num(det_max)
              << '\n';
  } else {
    std::cout << "sampled " << trials << " random hidden-variable models (seed " << seed
              << ")\n"
              << "max |S| observed: " << num(max_s) << '\n'
              << "deterministic maximum: " << num(det_max) << '\n';
  }
  return 0;
}

int run_witness(const std::string& format) {
  const qpm::WitnessReport w = qpm::no_lhv_witness();
  if (format == "json") {
    emit_json(qpm::witness_to_json(w));
  } else if (format == "csv") {
    const qpm::CorrelationReport& r = w.correlations;
    std::cout << "zi_ixpz,xi_ixpz,xi_izmx,zi_izmx,s,classical_bound,violated,margin\n"
              << num(r.zi_ixpz) << ',' << num(r.xi_ixpz) << ',' << num(r.xi_izmx) << ','
              << num(r.zi_izmx) << ',' << num(r.s) << ',' << num(w.classical_bound)
              << ',' << (w.violated ? "true" : "false") << ',' << num(w.margin) << '\n';
  } else {
    print_report_human(w.correlations);
    if (w.violated) {
      std::cout << "violated: yes (margin " << num(w.margin)
                << ") -- no local hidden-variable model reproduces these "
                   "correlations\n";
    } else {
      std::cout << "violated: no (margin " << num(w.margin) << "), no witness\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective measurements over density operators and the CHSH analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "human"}));

  std::string input;
  CLI::App* decompose = app.add_subcommand(
      "decompose", "spectral decomposition of an observable into a measurement");
  decompose->add_option("--input", input, "observable matrix (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  std::string state_path;
  std::string obs_path;
  CLI::App* measure =
      app.add_subcommand("measure", "outcome distribution and collapsed states");
  measure->add_option("--state", state_path, "density operator (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  measure->add_option("--observable", obs_path, "observable matrix (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* chsh_quantum = app.add_subcommand(
      "chsh-quantum", "CHSH correlations of the singlet state");

  std::uint64_t trials = 0;
  std::int64_t seed = 0;
  unsigned workers = 1;
  CLI::App* chsh_lhv = app.add_subcommand(
      "chsh-lhv", "max |S| over random local hidden-variable models");
  chsh_lhv->add_option("--trials", trials, "number of random models")
      ->required()
      ->check(CLI::PositiveNumber);
  chsh_lhv->add_option("--seed", seed, "RNG seed")->envname("QPM_SEED");
  chsh_lhv->add_option("--workers", workers, "parallel workers")
      ->check(CLI::Range(1u, 256u));

  CLI::App* witness =
      app.add_subcommand("witness", "quantum value vs the classical bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (app.got_subcommand(decompose)) return run_decompose(input, format);
    if (app.got_subcommand(measure)) return run_measure(state_path, obs_path, format);
    if (app.got_subcommand(chsh_quantum)) return run_chsh_quantum(format);
    if (app.got_subcommand(chsh_lhv)) {
      return run_chsh_lhv(trials, static_cast<std::uint64_t>(seed), workers, format);
    }
    if (app.got_subcommand(witness)) return run_witness(format);
    return kExitInput;
  } catch (const qpm::SchemaError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const qpm::NumericalError& e) {
    std::cerr << "numerical integrity error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const qpm::Error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
