// SPDX-License-Identifier: Apache-2.0
#include "ltv/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ltv {

void ExperimentConfig::validate() const {
  if (k_grid < 1) throw std::invalid_argument("k_grid must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (u_measures.empty()) throw std::invalid_argument("the |U| sweep is empty");
  for (double u : u_measures)
    if (!(u > 0) || !std::isfinite(u)) throw std::invalid_argument("every |U| must be finite and > 0");
  if (subdiv < 1) throw std::invalid_argument("subdiv must be >= 1");
  if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be finite and > 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  error.validate();
}

std::uint64_t ExperimentConfig::trial_seed(std::size_t u_index, int trial_index) const {
  return seed + 1000u * std::uint64_t(u_index) + std::uint64_t(trial_index);
}

namespace {

// Runs task(0..count-1) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& task) {
  const int workers = std::min(threads, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) task(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const TimeGrid<double> grid = TimeGrid<double>::centered(cfg.n_samples, cfg.dt);
  const Signald pulse = make_gaussian(grid, Point2<double>(0.0, 0.0), 1.0);
  ErrorConfig ecfg = cfg.error;

  const int n_u = int(cfg.u_measures.size());
  std::vector<std::unique_ptr<PulseProfile>> profiles(n_u);
  std::vector<std::string> profile_errors(n_u);
  parallel_for(n_u, cfg.threads, [&](int k) {
    try {
      const CellSpreading support =
          sample_cell_spreading(cfg.k_grid, cfg.u_measures[k], 0, cfg.placement, ecfg.alpha);
      profiles[k] = std::make_unique<PulseProfile>(pulse, pulse, support, cfg.subdiv);
    } catch (const std::exception& err) {
      profile_errors[k] = err.what();
    }
  });

  std::vector<TrialRecord> records(std::size_t(n_u) * cfg.trials);
  parallel_for(int(records.size()), cfg.threads, [&](int index) {
    const int k = index / cfg.trials;
    TrialRecord& rec = records[index];
    rec.u_measure = cfg.u_measures[k];
    rec.u_index = k;
    rec.trial = index % cfg.trials;
    rec.seed = cfg.trial_seed(k, rec.trial);
    const auto start = std::chrono::steady_clock::now();
    if (!profiles[k]) {
      rec.error = profile_errors[k];
    } else {
      try {
        const CellSpreading s =
            sample_cell_spreading(cfg.k_grid, rec.u_measure, rec.seed, cfg.placement, ecfg.alpha);
        rec.report = full_report(s, *profiles[k], *profiles[k], ecfg);
      } catch (const std::exception& err) {
        rec.error = err.what();
      }
    }
    if (cfg.timing)
      rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return records;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "u_measure",   "u_index",          "trial",         "seed",        "e_p",         "ratio",
      "e_p_reason",  "thm2_bound",       "kozek_simplified", "kozek_reason", "general_bound", "r_inf_bound",
      "rho_bar_inf", "r_inf",            "fidelity2",     "fidelity1",   "c2_feasible", "r1",
      "r1_reason",   "r2",               "r2_reason",     "c2_modulus_bound", "sup_converged", "trial_error",
      "wall_time_s"};
  return columns;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> row_of(const TrialRecord& r) {
  std::vector<std::string> row{fmt(r.u_measure), std::to_string(r.u_index), std::to_string(r.trial),
                               std::to_string(r.seed)};
  auto reported = [&](const Reported<double>& v) { row.push_back(v.has_value() ? fmt(*v) : std::string()); };
  auto reason = [&](const Reported<double>& v) { row.push_back(v.has_value() ? std::string() : v.reason); };
  if (r.report) {
    const BoundReport& b = *r.report;
    reported(b.e_p);
    reported(b.ratio);
    reason(b.e_p);
    row.push_back(fmt(b.thm2_bound));
    reported(b.kozek_simplified);
    reason(b.kozek_simplified);
    for (double v : {b.general_bound, b.r_inf_bound, b.rho_bar_inf, b.r_inf, b.fidelity2, b.fidelity1})
      row.push_back(fmt(v));
    row.push_back(b.c2_feasible ? "1" : "0");
    reported(b.r1);
    reason(b.r1);
    reported(b.r2);
    reason(b.r2);
    row.push_back(fmt(b.c2_modulus_bound));
    row.push_back(b.sup_converged ? "1" : "0");
  } else {
    row.resize(csv_columns().size() - 2);
  }
  row.push_back(r.error);
  row.push_back(r.wall_time ? fmt(*r.wall_time) : std::string());
  return row;
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
      continue;
    } else if (c != '\r') {
      field += c;
    }
    any = true;
  }
  if (quoted) throw std::invalid_argument("CSV: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("CSV: bad number '" + s + "'");
  return v;
}

Reported<double> to_reported(const std::string& value, const std::string& reason) {
  if (value.empty()) return Reported<double>::absent(reason);
  return Reported<double>::ok(to_double(value));
}

}  // namespace

std::string format_csv(const std::vector<TrialRecord>& records) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += quote(fields[i]);
    }
    out += '\n';
  };
  line(csv_columns());
  for (const TrialRecord& r : records) line(row_of(r));
  return out;
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  const std::string text = format_csv(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), std::streamsize(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<TrialRecord> parse_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty() || rows.front() != csv_columns()) throw std::invalid_argument("CSV: unexpected header");
  std::vector<TrialRecord> records;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    const auto& f = rows[n];
    if (f.size() != csv_columns().size()) throw std::invalid_argument("CSV: wrong column count in row " + std::to_string(n));
    TrialRecord r;
    r.u_measure = to_double(f[0]);
    r.u_index = std::stoi(f[1]);
    r.trial = std::stoi(f[2]);
    r.seed = std::stoull(f[3]);
    if (!f[7].empty()) {
      BoundReport b;
      b.e_p = to_reported(f[4], f[6]);
      b.ratio = to_reported(f[5], f[6]);
      b.thm2_bound = to_double(f[7]);
      b.kozek_simplified = to_reported(f[8], f[9]);
      b.general_bound = to_double(f[10]);
      b.r_inf_bound = to_double(f[11]);
      b.rho_bar_inf = to_double(f[12]);
      b.r_inf = to_double(f[13]);
      b.fidelity2 = to_double(f[14]);
      b.fidelity1 = to_double(f[15]);
      b.c2_feasible = f[16] == "1";
      b.r1 = to_reported(f[17], f[18]);
      b.r2 = to_reported(f[19], f[20]);
      b.c2_modulus_bound = to_double(f[21]);
      b.sup_converged = f[22] == "1";
      r.report = b;
    }
    r.error = f[23];
    if (!f[24].empty()) r.wall_time = to_double(f[24]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace ltv
