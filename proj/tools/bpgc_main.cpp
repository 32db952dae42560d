#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bpgc/csv.hpp"
#include "bpgc/density.hpp"
#include "bpgc/ff_test.hpp"
#include "bpgc/mle.hpp"
#include "bpgc/rng.hpp"
#include "bpgc/sampler.hpp"
#include "bpgc/version.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDefaultSeed = 1;

const char* const kCoordinateNames[5] = {"m10", "m01", "m11", "m02", "m12"};

int exit_code_for(bpgc::errc code) {
  switch (code) {
    case bpgc::errc::io_error:
      return 3;
    case bpgc::errc::no_convergence:
    case bpgc::errc::overflow:
    case bpgc::errc::did_not_converge:
      return 4;
    default:
      return 2;
  }
}

bpgc::Params params_from_flag(const std::vector<double>& values) {
  return bpgc::validate_params(values[0], values[1], values[2], values[3],
                               values[4]);
}

json params_json(const bpgc::Params& p) {
  return json{{"m10", p.m10},
              {"m01", p.m01},
              {"m11", p.m11},
              {"m02", p.m02},
              {"m12", p.m12}};
}

json vec5_json(const bpgc::Vec5& v) {
  json out;
  for (int j = 0; j < 5; ++j) out[kCoordinateNames[j]] = v[j];
  return out;
}

/// Machine-readable result document on standard output; optional copy to a
/// file.  Human-readable notes go to standard error so stdout stays a single
/// JSON document.
void emit_report(const json& report, const std::string& copy_path = {}) {
  std::cout << report.dump(2) << '\n';
  if (!copy_path.empty()) {
    std::ofstream out(copy_path);
    if (!out) {
      throw bpgc::Error(bpgc::errc::io_error,
                        "cannot open " + copy_path + " for writing");
    }
    out << report.dump(2) << '\n';
  }
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

int thread_count() {
  if (const char* env = std::getenv("BPGC_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1 && parsed <= 64) return static_cast<int>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

struct GridSpec {
  std::int64_t x_lo;
  std::int64_t x_hi;
  double y_lo;
  double y_hi;
  int y_count;
};

/// Grammar: x=<int>..<int>,y=<real>..<real>:<count>, e.g. x=0..15,y=0.1..10:100.
GridSpec parse_grid(const std::string& spec) {
  const auto fail = [&spec](const std::string& why) -> GridSpec {
    throw bpgc::Error(bpgc::errc::parse_error,
                      "grid \"" + spec + "\": " + why);
  };
  const std::size_t comma = spec.find(',');
  if (comma == std::string::npos) return fail("expected x=...,y=...");
  const std::string x_part = spec.substr(0, comma);
  const std::string y_part = spec.substr(comma + 1);
  if (x_part.substr(0, 2) != "x=" || y_part.substr(0, 2) != "y=") {
    return fail("expected x=...,y=...");
  }

  GridSpec grid{};
  {
    const std::string range = x_part.substr(2);
    const std::size_t dots = range.find("..");
    if (dots == std::string::npos) return fail("x range needs lo..hi");
    try {
      grid.x_lo = std::stoll(range.substr(0, dots));
      grid.x_hi = std::stoll(range.substr(dots + 2));
    } catch (const std::exception&) {
      return fail("x bounds must be integers");
    }
    if (grid.x_lo < 0 || grid.x_hi < grid.x_lo) {
      return fail("x range must satisfy 0 <= lo <= hi");
    }
  }
  {
    const std::string range = y_part.substr(2);
    const std::size_t dots = range.find("..");
    const std::size_t colon = range.find(':', dots == std::string::npos
                                                    ? 0
                                                    : dots + 2);
    if (dots == std::string::npos || colon == std::string::npos) {
      return fail("y range needs lo..hi:count");
    }
    try {
      grid.y_lo = std::stod(range.substr(0, dots));
      grid.y_hi = std::stod(range.substr(dots + 2, colon - dots - 2));
      grid.y_count = std::stoi(range.substr(colon + 1));
    } catch (const std::exception&) {
      return fail("y bounds must be reals and count an integer");
    }
    if (!(grid.y_lo > 0.0) || !(grid.y_hi >= grid.y_lo) || grid.y_count < 1) {
      return fail("y range must satisfy 0 < lo <= hi and count >= 1");
    }
  }
  return grid;
}

int run_eval(const std::vector<double>& params_flag,
             const std::optional<std::int64_t>& x,
             const std::optional<double>& y, const std::string& grid_spec,
             double tol, const std::string& out_path) {
  const auto start = Clock::now();
  const bpgc::Params params = params_from_flag(params_flag);
  const bpgc::LogNormalizer norm = bpgc::log_normalizer(params, tol);

  if (!grid_spec.empty()) {
    const GridSpec grid = parse_grid(grid_spec);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) {
        throw bpgc::Error(bpgc::errc::io_error,
                          "cannot open " + out_path + " for writing");
      }
      out = &file;
    }
    (*out) << "x,y,density\n";
    char row[96];
    for (std::int64_t xi = grid.x_lo; xi <= grid.x_hi; ++xi) {
      for (int k = 0; k < grid.y_count; ++k) {
        const double yk =
            grid.y_count == 1
                ? grid.y_lo
                : grid.y_lo + (grid.y_hi - grid.y_lo) * k / (grid.y_count - 1);
        const double density = std::exp(
            bpgc::log_pdf(params, bpgc::make_observation(xi, yk), norm));
        std::snprintf(row, sizeof(row), "%lld,%.17g,%.17g\n",
                      static_cast<long long>(xi), yk, density);
        (*out) << row;
      }
    }
    if (!*out) {
      throw bpgc::Error(bpgc::errc::io_error, "grid write failed");
    }
    return 0;
  }

  if (!x.has_value() || !y.has_value()) {
    throw bpgc::Error(bpgc::errc::parse_error,
                      "eval needs either --x and --y, or --grid");
  }
  const bpgc::Observation obs = bpgc::make_observation(*x, *y);
  const double log_density = bpgc::log_pdf(params, obs, norm);

  json report;
  report["command"] = "eval";
  report["version"] = bpgc::kVersion;
  report["params"] = params_json(params);
  report["x"] = obs.x;
  report["y"] = obs.y;
  report["log_density"] = log_density;
  report["density"] = std::exp(log_density);
  report["normalizer"] = json{{"c", norm.c},
                              {"terms_used", norm.terms_used},
                              {"tail_bound", norm.tail_bound}};
  report["tol"] = tol;
  report["timing_ms"] = elapsed_ms(start);
  emit_report(report);
  return 0;
}

void write_histogram(const std::string& path,
                     const std::vector<bpgc::Observation>& draws) {
  std::int64_t x_max = 0;
  double y_max = 0.0;
  for (const bpgc::Observation& obs : draws) {
    x_max = std::max(x_max, obs.x);
    y_max = std::max(y_max, obs.y);
  }
  constexpr int kYBins = 30;
  const double y_width = y_max / kYBins;
  std::vector<std::int64_t> counts(
      static_cast<std::size_t>((x_max + 1) * kYBins), 0);
  for (const bpgc::Observation& obs : draws) {
    int yb = y_width > 0.0 ? static_cast<int>(obs.y / y_width) : 0;
    yb = std::min(yb, kYBins - 1);
    ++counts[static_cast<std::size_t>(obs.x * kYBins + yb)];
  }

  std::ofstream out(path);
  if (!out) {
    throw bpgc::Error(bpgc::errc::io_error,
                      "cannot open " + path + " for writing");
  }
  out << "x,y_lo,y_hi,count\n";
  char row[96];
  for (std::int64_t xi = 0; xi <= x_max; ++xi) {
    for (int yb = 0; yb < kYBins; ++yb) {
      std::snprintf(
          row, sizeof(row), "%lld,%.17g,%.17g,%lld\n",
          static_cast<long long>(xi), yb * y_width, (yb + 1) * y_width,
          static_cast<long long>(
              counts[static_cast<std::size_t>(xi * kYBins + yb)]));
      out << row;
    }
  }
}

int run_sample(const std::vector<double>& params_flag, std::int64_t n,
               std::uint64_t seed, const std::string& method,
               std::int64_t burn_in, std::int64_t thin,
               const std::string& out_path, const std::string& hist_path) {
  const auto start = Clock::now();
  const bpgc::Params params = params_from_flag(params_flag);

  bpgc::SampleBatch batch;
  if (method == "exact") {
    batch = bpgc::exact_sample(params, n, seed);
  } else if (method == "gibbs") {
    bpgc::GibbsConfig config;
    config.n = n;
    config.burn_in = burn_in;
    config.thin = thin;
    config.seed = seed;
    batch = bpgc::gibbs_sample(params, config);
  } else {
    throw bpgc::Error(bpgc::errc::parse_error,
                      "--method must be gibbs or exact");
  }
  bpgc::write_dataset(out_path, batch.draws);
  if (!hist_path.empty()) write_histogram(hist_path, batch.draws);

  json report;
  report["command"] = "sample";
  report["version"] = bpgc::kVersion;
  report["params"] = params_json(params);
  report["n"] = n;
  report["seed"] = seed;
  report["method"] = method;
  if (method == "gibbs") {
    report["burn_in"] = burn_in;
    report["thin"] = thin;
  }
  report["out"] = out_path;
  if (!hist_path.empty()) report["histogram"] = hist_path;
  report["timing_ms"] = elapsed_ms(start);
  emit_report(report);
  return 0;
}

json trace_json(const std::vector<bpgc::MleTraceEntry>& trace) {
  json out = json::array();
  for (const bpgc::MleTraceEntry& entry : trace) {
    out.push_back(json{{"mu", entry.mu},
                       {"loglik", entry.loglik},
                       {"grad_norm", entry.grad_norm}});
  }
  return out;
}

json fit_json(const bpgc::MleResult& fit) {
  json out;
  out["estimates"] = params_json(fit.estimates);
  out["loglik"] = fit.loglik;
  out["converged"] = fit.converged;
  out["n"] = fit.n;
  out["trace"] = trace_json(fit.trace);
  json boundary = json::array();
  for (bool b : fit.at_boundary) boundary.push_back(b);
  out["at_boundary"] = boundary;
  if (fit.std_errors.has_value()) {
    json se = json::array();
    for (int j = 0; j < 5; ++j) {
      const double v = (*fit.std_errors)[j];
      if (std::isnan(v)) {
        se.push_back(nullptr);
      } else {
        se.push_back(v);
      }
    }
    out["std_errors"] = se;
  } else {
    out["std_errors"] = nullptr;
    out["std_errors_note"] = "information matrix not invertible";
  }
  return out;
}

int run_fit(const std::string& data_path, const std::vector<double>& init,
            bool moment_init, const std::string& report_path) {
  const auto start = Clock::now();
  const bpgc::Dataset data = bpgc::read_dataset(data_path);

  bpgc::MleConfig config;
  if (!init.empty()) {
    for (int j = 0; j < 5; ++j) config.init[j] = init[static_cast<std::size_t>(j)];
  }
  config.moment_init = moment_init;
  const bpgc::MleResult fit = bpgc::fit_mle(data, config);

  json report;
  report["command"] = "fit";
  report["version"] = bpgc::kVersion;
  report["data"] = data_path;
  report.update(fit_json(fit));
  report["timing_ms"] = elapsed_ms(start);
  emit_report(report, report_path);

  std::ostringstream summary;
  summary << "fit " << (fit.converged ? "converged" : "did not converge")
          << ", loglik " << fit.loglik << ", estimates";
  for (int j = 0; j < 5; ++j) {
    summary << ' ' << kCoordinateNames[j] << '='
            << fit.estimates.vec()[j];
  }
  std::cerr << summary.str() << '\n';
  return fit.converged ? 0 : 4;
}

int run_gof(const std::string& data_path, std::int64_t n_perm,
            std::uint64_t seed, const std::string& method, std::int64_t n_sim,
            bool self_test, const std::string& report_path) {
  const auto start = Clock::now();
  const bpgc::Dataset data = bpgc::read_dataset(data_path);

  bpgc::GofConfig config;
  config.n_perm = n_perm;
  config.seed = seed;
  config.n_sim = n_sim;
  if (method == "exact") {
    config.sampler = bpgc::SamplerKind::exact;
  } else if (method == "gibbs") {
    config.sampler = bpgc::SamplerKind::gibbs;
  } else {
    throw bpgc::Error(bpgc::errc::parse_error,
                      "--method must be gibbs or exact");
  }

  json report;
  report["command"] = "gof";
  report["version"] = bpgc::kVersion;
  report["data"] = data_path;
  report["seed"] = seed;
  report["n_perm"] = n_perm;
  report["method"] = method;

  int code = 0;
  if (self_test) {
    const bpgc::GofResult result =
        bpgc::ff_test(data.observations(), data.observations(), config);
    report["self_test"] = true;
    report["d_stat"] = result.d_stat;
    report["raw_stat"] = result.raw_stat;
    report["p_value"] = result.p_value;
    report["n1"] = result.n1;
    report["n2"] = result.n2;
  } else {
    const bpgc::FittedGof run = bpgc::fitted_gof(data, config);
    report["fit"] = fit_json(run.fit);
    report["d_stat"] = run.gof.d_stat;
    report["raw_stat"] = run.gof.raw_stat;
    report["p_value"] = run.gof.p_value;
    report["n1"] = run.gof.n1;
    report["n2"] = run.gof.n2;
    code = run.fit.converged ? 0 : 4;
  }
  report["timing_ms"] = elapsed_ms(start);
  emit_report(report, report_path);
  return code;
}

bpgc::Params case_params(int case_id) {
  switch (case_id) {
    case 1: return bpgc::validate_params(1, 1, 0.1, 1, 0.1);
    case 2: return bpgc::validate_params(1, 1, 1, 1, 1);
    case 3: return bpgc::validate_params(1, 5, 1, 5, 1);
    case 4: return bpgc::validate_params(5, 5, 5, 5, 5);
    default:
      throw bpgc::Error(bpgc::errc::parse_error, "--case must be 1..4");
  }
}

int run_simstudy(int case_id, const std::vector<double>& params_flag,
                 std::vector<std::int64_t> sizes, int replicates,
                 std::uint64_t seed, std::int64_t n_perm,
                 const std::string& out_dir) {
  const auto start = Clock::now();
  const bpgc::Params truth = params_flag.empty()
                                 ? case_params(case_id)
                                 : params_from_flag(params_flag);
  if (sizes.empty()) sizes = {100, 1000, 10000};
  for (std::int64_t s : sizes) {
    if (s < 5) {
      throw bpgc::Error(bpgc::errc::parse_error, "--sizes entries must be >= 5");
    }
  }
  if (replicates < 1) {
    throw bpgc::Error(bpgc::errc::parse_error, "--replicates must be >= 1");
  }

  std::filesystem::create_directories(out_dir);

  struct Slot {
    bool ok = false;
    bpgc::Vec5 estimates = bpgc::Vec5::Zero();
  };
  const std::size_t n_sizes = sizes.size();
  const std::size_t total =
      n_sizes * static_cast<std::size_t>(replicates);
  std::vector<Slot> slots(total);

  // Replicate seeds are assigned up front by flat index, so results do not
  // depend on the number of worker threads.
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t job = cursor.fetch_add(1);
      if (job >= total) return;
      const std::size_t size_index = job / static_cast<std::size_t>(replicates);
      try {
        const bpgc::SampleBatch batch = bpgc::exact_sample(
            truth, sizes[size_index],
            bpgc::child_seed(seed, static_cast<std::uint64_t>(job)));
        const bpgc::Dataset data(batch.draws);
        bpgc::MleConfig config;
        config.compute_std_errors = false;
        const bpgc::MleResult fit = bpgc::fit_mle(data, config);
        slots[job].ok = fit.converged;
        slots[job].estimates = fit.estimates.vec();
      } catch (const bpgc::Error&) {
        slots[job].ok = false;
      }
    }
  };
  {
    const int workers = std::min<int>(thread_count(),
                                      static_cast<int>(total));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Per-size summaries: mean estimate and mean absolute error per coordinate.
  const std::string table1_path = out_dir + "/table1.csv";
  std::ofstream table1(table1_path);
  if (!table1) {
    throw bpgc::Error(bpgc::errc::io_error, "cannot write " + table1_path);
  }
  table1 << "size,coordinate,truth,mean_estimate,mae,replicates_ok\n";
  json mae_json = json::array();
  std::size_t ok_total = 0;
  for (std::size_t si = 0; si < n_sizes; ++si) {
    bpgc::Vec5 mean = bpgc::Vec5::Zero();
    bpgc::Vec5 mae = bpgc::Vec5::Zero();
    std::size_t ok = 0;
    for (int r = 0; r < replicates; ++r) {
      const Slot& slot = slots[si * static_cast<std::size_t>(replicates) +
                               static_cast<std::size_t>(r)];
      if (!slot.ok) continue;
      ++ok;
      mean += slot.estimates;
      mae += (slot.estimates - truth.vec()).cwiseAbs();
    }
    ok_total += ok;
    if (ok > 0) {
      mean /= static_cast<double>(ok);
      mae /= static_cast<double>(ok);
    }
    char row[160];
    for (int j = 0; j < 5; ++j) {
      std::snprintf(row, sizeof(row), "%lld,%s,%.17g,%.17g,%.17g,%zu\n",
                    static_cast<long long>(sizes[si]), kCoordinateNames[j],
                    truth.vec()[j], mean[j], mae[j], ok);
      table1 << row;
    }
    json entry;
    entry["size"] = sizes[si];
    entry["replicates_ok"] = ok;
    entry["mean_estimate"] = vec5_json(mean);
    entry["mae"] = vec5_json(mae);
    mae_json.push_back(entry);
  }
  table1.close();

  // Fitted-vs-truth test per size, using the first successful replicate.
  const std::string table2_path = out_dir + "/table2.csv";
  std::ofstream table2(table2_path);
  if (!table2) {
    throw bpgc::Error(bpgc::errc::io_error, "cannot write " + table2_path);
  }
  table2 << "size,d_stat,raw_stat,p_value\n";
  json tests_json = json::array();
  const std::uint64_t aux_base = static_cast<std::uint64_t>(total);
  for (std::size_t si = 0; si < n_sizes; ++si) {
    const Slot* fitted = nullptr;
    for (int r = 0; r < replicates && fitted == nullptr; ++r) {
      const Slot& slot = slots[si * static_cast<std::size_t>(replicates) +
                               static_cast<std::size_t>(r)];
      if (slot.ok) fitted = &slot;
    }
    if (fitted == nullptr) continue;
    const bpgc::Params fitted_params = bpgc::validate_params(fitted->estimates);
    const std::int64_t n_test = 1000;
    const bpgc::SampleBatch from_fit = bpgc::exact_sample(
        fitted_params, n_test,
        bpgc::child_seed(seed, aux_base + 3 * si));
    const bpgc::SampleBatch from_truth = bpgc::exact_sample(
        truth, n_test, bpgc::child_seed(seed, aux_base + 3 * si + 1));
    bpgc::GofConfig config;
    config.n_perm = n_perm;
    config.seed = bpgc::child_seed(seed, aux_base + 3 * si + 2);
    const bpgc::GofResult result =
        bpgc::ff_test(from_fit.draws, from_truth.draws, config);
    char row[128];
    std::snprintf(row, sizeof(row), "%lld,%.17g,%lld,%.17g\n",
                  static_cast<long long>(sizes[si]), result.d_stat,
                  static_cast<long long>(result.raw_stat), result.p_value);
    table2 << row;
    json entry;
    entry["size"] = sizes[si];
    entry["d_stat"] = result.d_stat;
    entry["raw_stat"] = result.raw_stat;
    entry["p_value"] = result.p_value;
    tests_json.push_back(entry);
  }
  table2.close();

  const double success_rate =
      static_cast<double>(ok_total) / static_cast<double>(total);
  json report;
  report["command"] = "simstudy";
  report["version"] = bpgc::kVersion;
  report["truth"] = params_json(truth);
  report["sizes"] = sizes;
  report["replicates"] = replicates;
  report["seed"] = seed;
  report["n_perm"] = n_perm;
  report["success_rate"] = success_rate;
  report["recovery"] = mae_json;
  report["fitted_vs_truth"] = tests_json;
  report["table1"] = table1_path;
  report["table2"] = table2_path;
  report["timing_ms"] = elapsed_ms(start);
  emit_report(report);

  std::cerr << "simstudy: " << ok_total << '/' << total
            << " replicates converged\n";
  return success_rate >= 0.9 ? 0 : 4;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

json describe(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  return json{{"min", values.front()},
              {"q25", quantile_sorted(values, 0.25)},
              {"median", quantile_sorted(values, 0.5)},
              {"mean", mean},
              {"q75", quantile_sorted(values, 0.75)},
              {"max", values.back()}};
}

int run_make_dataset(const std::string& template_name, std::int64_t n,
                     std::uint64_t seed, const std::string& out_path) {
  const auto start = Clock::now();
  if (template_name != "hospital") {
    throw bpgc::Error(bpgc::errc::parse_error,
                      "unknown template \"" + template_name + "\"");
  }
  const bpgc::Params params =
      bpgc::validate_params(2.1809, 0.1880, 0.0018, 2.4806, 0.0535);
  const bpgc::SampleBatch batch = bpgc::exact_sample(params, n, seed);
  bpgc::write_dataset(out_path, batch.draws);

  std::vector<double> xs, ys;
  xs.reserve(batch.draws.size());
  ys.reserve(batch.draws.size());
  for (const bpgc::Observation& obs : batch.draws) {
    xs.push_back(static_cast<double>(obs.x));
    ys.push_back(obs.y);
  }

  json report;
  report["command"] = "make-dataset";
  report["version"] = bpgc::kVersion;
  report["template"] = template_name;
  report["params"] = params_json(params);
  report["n"] = n;
  report["seed"] = seed;
  report["out"] = out_path;
  report["x"] = describe(xs);
  report["y"] = describe(ys);
  report["timing_ms"] = elapsed_ms(start);
  emit_report(report);

  std::cerr << "wrote " << n << " rows to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bivariate Poisson-Gamma conditionals toolkit"};
  app.require_subcommand(1);

  std::vector<double> eval_params;
  std::optional<std::int64_t> eval_x;
  std::optional<double> eval_y;
  std::string eval_grid;
  double eval_tol = 1e-12;
  std::string eval_out;
  auto* eval_cmd =
      app.add_subcommand("eval", "evaluate the joint density");
  eval_cmd->add_option("--params", eval_params, "m10 m01 m11 m02 m12")
      ->required()
      ->expected(5);
  eval_cmd->add_option("--x", eval_x, "count coordinate");
  eval_cmd->add_option("--y", eval_y, "continuous coordinate");
  eval_cmd->add_option("--grid", eval_grid,
                       "surface grid, e.g. x=0..15,y=0.1..10:100");
  eval_cmd->add_option("--tol", eval_tol, "series tolerance");
  eval_cmd->add_option("--out", eval_out, "grid CSV path (default stdout)");

  std::vector<double> sample_params;
  std::int64_t sample_n = 0;
  std::uint64_t sample_seed = kDefaultSeed;
  std::string sample_method = "gibbs";
  std::int64_t sample_burn_in = 1000;
  std::int64_t sample_thin = 5;
  std::string sample_out;
  std::string sample_hist;
  auto* sample_cmd = app.add_subcommand("sample", "draw from the model");
  sample_cmd->add_option("--params", sample_params, "m10 m01 m11 m02 m12")
      ->required()
      ->expected(5);
  sample_cmd->add_option("--n", sample_n, "number of draws")
      ->required()
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample_seed, "random seed");
  sample_cmd->add_option("--method", sample_method, "gibbs or exact");
  sample_cmd->add_option("--burn-in", sample_burn_in, "Gibbs burn-in sweeps");
  sample_cmd->add_option("--thin", sample_thin, "Gibbs thinning stride");
  sample_cmd->add_option("--out", sample_out, "dataset CSV path")->required();
  sample_cmd->add_option("--hist", sample_hist,
                         "joint histogram CSV (x unit bins, 30 y bins)");

  std::string fit_data;
  std::vector<double> fit_init;
  bool fit_moment_init = false;
  std::string fit_report;
  auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit");
  fit_cmd->add_option("--data", fit_data, "dataset CSV path")->required();
  fit_cmd->add_option("--init", fit_init, "starting point (5 reals)")
      ->expected(5);
  fit_cmd->add_flag("--moment-init", fit_moment_init,
                    "moment-guided starting point");
  fit_cmd->add_option("--report", fit_report, "also write the report here");

  std::string gof_data;
  std::int64_t gof_nperm = 999;
  std::uint64_t gof_seed = kDefaultSeed;
  std::string gof_method = "exact";
  std::int64_t gof_nsim = 0;
  bool gof_self_test = false;
  std::string gof_report;
  auto* gof_cmd =
      app.add_subcommand("gof", "fitted-model goodness of fit");
  gof_cmd->add_option("--data", gof_data, "dataset CSV path")->required();
  gof_cmd->add_option("--nperm", gof_nperm, "permutation count");
  gof_cmd->add_option("--seed", gof_seed, "random seed");
  gof_cmd->add_option("--method", gof_method, "simulation sampler");
  gof_cmd->add_option("--nsim", gof_nsim,
                      "simulated sample size (default: data size)");
  gof_cmd->add_flag("--self-test", gof_self_test,
                    "test the data against itself (expect d_stat 0)");
  gof_cmd->add_option("--report", gof_report, "also write the report here");

  int study_case = 1;
  std::vector<double> study_params;
  std::vector<std::int64_t> study_sizes;
  int study_replicates = 20;
  std::uint64_t study_seed = kDefaultSeed;
  std::int64_t study_nperm = 199;
  std::string study_out = "simstudy_out";
  auto* study_cmd =
      app.add_subcommand("simstudy", "simulation study tables");
  study_cmd->add_option("--case", study_case, "built-in truth 1..4");
  study_cmd->add_option("--params", study_params,
                        "explicit truth (overrides --case)")
      ->expected(5);
  study_cmd->add_option("--sizes", study_sizes,
                        "sample sizes (default 100,1000,10000)")
      ->delimiter(',');
  study_cmd->add_option("--replicates", study_replicates,
                        "replicates per size");
  study_cmd->add_option("--seed", study_seed, "random seed");
  study_cmd->add_option("--nperm", study_nperm,
                        "permutations for the fitted-vs-truth test");
  study_cmd->add_option("--out", study_out, "output directory");

  std::string make_template = "hospital";
  std::int64_t make_n = 500;
  std::uint64_t make_seed = kDefaultSeed;
  std::string make_out;
  auto* make_cmd = app.add_subcommand(
      "make-dataset", "regenerate a template-distribution dataset");
  make_cmd->add_option("--template", make_template, "template name");
  make_cmd->add_option("--n", make_n, "rows")->check(CLI::PositiveNumber);
  make_cmd->add_option("--seed", make_seed, "random seed");
  make_cmd->add_option("--out", make_out, "dataset CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (eval_cmd->parsed()) {
      return run_eval(eval_params, eval_x, eval_y, eval_grid, eval_tol,
                      eval_out);
    }
    if (sample_cmd->parsed()) {
      return run_sample(sample_params, sample_n, sample_seed, sample_method,
                        sample_burn_in, sample_thin, sample_out, sample_hist);
    }
    if (fit_cmd->parsed()) {
      return run_fit(fit_data, fit_init, fit_moment_init, fit_report);
    }
    if (gof_cmd->parsed()) {
      return run_gof(gof_data, gof_nperm, gof_seed, gof_method, gof_nsim,
                     gof_self_test, gof_report);
    }
    if (study_cmd->parsed()) {
      return run_simstudy(study_case, study_params, study_sizes,
                          study_replicates, study_seed, study_nperm,
                          study_out);
    }
    if (make_cmd->parsed()) {
      return run_make_dataset(make_template, make_n, make_seed, make_out);
    }
  } catch (const bpgc::Error& e) {
    std::cerr << bpgc::errc_name(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
