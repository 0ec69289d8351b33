/*
 * Copyright 2026 The podas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// podas: command-line front end for POD/active-subspace reduced models.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "podas/podas.hpp"

namespace fs = std::filesystem;

namespace {

using namespace podas;

constexpr const char* kToolVersion = "1.0.0";

struct Options {
  std::string config;
  std::uint64_t seed = kDefaultPresetSeed;
  std::string preset;
  std::string snapshots;
  std::string params;
  std::string space;
  std::string out;
  std::optional<Eigen::Index> rank;
  std::optional<double> energy;
  bool center = false;
  std::vector<std::string> methods;
  std::string gradients;
  std::string kernel = "thin-plate";
  double shape = 1.0;
  int k = 5;
  std::string sizes;
  std::string model;
  std::vector<double> mu;
  Eigen::Index samples = 0;
  Eigen::Index mode = 1;
  bool all_modes = false;
  bool binary = false;
};

// --- configuration file ------------------------------------------------------

// Grammar: one `key = value` per line, `#` starts a comment, keys are long
// flag names without dashes. Boolean flags take true/false.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  auto in = io::open_in(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view sv = io::detail::trim(line);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no, 1);
    const std::string key(io::detail::trim(sv.substr(0, eq)));
    const std::string value(io::detail::trim(sv.substr(eq + 1)));
    if (key.empty()) throw ParseError("empty key", line_no, 1);
    entries.emplace_back(key, value);
  }
  return entries;
}

const std::set<std::string> kFlagKeys = {"center", "all-modes", "binary"};

bool truthy(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("config key '" + key + "' expects true or false, got '" + v + "'");
}

/// Splices config entries into argv right after the subcommand. Keys given
/// on the command line are skipped, so flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "config") path = eq == std::string::npos ? (i + 1 < args.size() ? args[i + 1] : "") : a.substr(eq + 1);
  }
  if (path.empty() || args.size() < 2) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config(path)) {
    if (key == "config" || given.count(key)) continue;
    if (kFlagKeys.count(key)) {
      if (truthy(key, value)) injected.push_back("--" + key);
    } else {
      injected.push_back("--" + key + "=" + value);
    }
  }
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

// --- helpers -----------------------------------------------------------------

void prepare_out(const std::string& dir) {
  if (dir.empty()) throw InvalidArgument("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ",") {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

void write_manifest(const Options& o, const std::string& subcommand) {
  std::ofstream f = io::open_out((fs::path(o.out) / "manifest.txt").string());
  f << "tool=podas\n";
  f << "version=" << kToolVersion << '\n';
  f << "subcommand=" << subcommand << '\n';
  f << "config=" << o.config << '\n';
  f << "seed=" << o.seed << '\n';
  f << "preset=" << o.preset << '\n';
  f << "snapshots=" << o.snapshots << '\n';
  f << "params=" << o.params << '\n';
  f << "space=" << o.space << '\n';
  f << "model=" << o.model << '\n';
  f << "out=" << o.out << '\n';
  f << "rank=" << (o.rank ? std::to_string(*o.rank) : "") << '\n';
  f << "energy=" << (o.energy ? io::format_double(*o.energy) : "") << '\n';
  f << "center=" << (o.center ? "true" : "false") << '\n';
  f << "method=" << join(o.methods) << '\n';
  f << "gradients=" << o.gradients << '\n';
  f << "kernel=" << o.kernel << '\n';
  f << "shape=" << io::format_double(o.shape) << '\n';
  f << "k=" << o.k << '\n';
  f << "sizes=" << o.sizes << '\n';
  std::vector<std::string> mu;
  for (double v : o.mu) mu.push_back(io::format_double(v));
  f << "mu=" << join(mu) << '\n';
  f << "mode=" << (o.all_modes ? std::string("all") : std::to_string(o.mode)) << '\n';
  f << "samples=" << o.samples << '\n';
  f << "binary=" << (o.binary ? "true" : "false") << '\n';
}

struct Dataset {
  SnapshotSet data;
  ParameterSpace space;
  FieldJacobianFn jacobian;
  std::optional<PresetInfo> preset;
};

Dataset load_dataset(const Options& o) {
  if (!o.preset.empty()) {
    if (!o.snapshots.empty() || !o.params.empty())
      throw InvalidArgument("give either --preset or --snapshots/--params, not both");
    PresetInfo info = make_preset(parse_preset(o.preset), o.seed);
    SnapshotSet data = preset_dataset(info);
    FieldJacobianFn jac = info.problem.jacobian();
    ParameterSpace space = info.problem.space;
    return {std::move(data), std::move(space), std::move(jac), std::move(info)};
  }
  if (o.snapshots.empty() || o.params.empty())
    throw InvalidArgument("a dataset is needed: --preset NAME or --snapshots FILE --params FILE");
  Eigen::MatrixXd fields = io::load_snapshots(o.snapshots);
  ParameterSamples params = io::read_params_csv(o.params);
  std::optional<ParameterSpace> space;
  if (!o.space.empty()) {
    space = io::read_space_csv(o.space);
  } else {
    if (params.count() == 0) throw InvalidArgument("parameter file is empty");
    const Eigen::VectorXd lo = params.values.rowwise().minCoeff();
    const Eigen::VectorXd hi = params.values.rowwise().maxCoeff();
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i]))
        throw InvalidArgument("parameter axis " + std::to_string(i + 1) +
                              " is constant; pass the box with --space");
    space = ParameterSpace(lo, hi);
  }
  if (space->dim() != params.dim())
    throw InvalidArgument("space has " + std::to_string(space->dim()) + " axes but parameters have " +
                          std::to_string(params.dim()));
  return {SnapshotSet(std::move(fields), std::move(params)), std::move(*space), {}, std::nullopt};
}

TruncationCriterion truncation_for(const Options& o, const Dataset* d) {
  if (o.rank) return FixedRank{*o.rank};
  if (o.energy) return EnergyFraction{*o.energy};
  if (d && d->preset) return FixedRank{d->preset->rank};
  return EnergyFraction{1.0};
}

GradientMethod parse_gradients(const std::string& name) {
  if (name == "analytic") return GradientMethod::Analytic;
  if (name == "local-linear") return GradientMethod::LocalLinear;
  if (name == "global-linear") return GradientMethod::GlobalLinear;
  throw InvalidArgument("unknown gradient strategy '" + name + "'");
}

// Analytic gradients are the default whenever the truth Jacobian is known.
GradientMethod gradients_for(const Options& o, const Dataset& d) {
  const GradientMethod g = o.gradients.empty()
                               ? (d.jacobian ? GradientMethod::Analytic : GradientMethod::LocalLinear)
                               : parse_gradients(o.gradients);
  if (g == GradientMethod::Analytic && !d.jacobian)
    throw InvalidArgument("analytic gradients are only available for --preset datasets");
  return g;
}

RbfKernel kernel_for(const Options& o) {
  if (o.kernel == "thin-plate") return RbfKernel::thin_plate();
  if (o.kernel == "gaussian") return RbfKernel::gaussian(o.shape);
  if (o.kernel == "multiquadric") return RbfKernel::multiquadric(o.shape);
  throw InvalidArgument("unknown kernel '" + o.kernel + "'");
}

RomConfig config_for(const Options& o, const Dataset& d, const std::string& method) {
  RomConfig c;
  c.truncation = truncation_for(o, &d);
  c.center = o.center;
  if (method == "full-rbf")
    c.method = FullRbfMethod{kernel_for(o)};
  else if (method == "as-gpr")
    c.method = AsGprMethod{gradients_for(o, d)};
  else
    throw InvalidArgument("unknown method '" + method + "' (full-rbf, as-gpr)");
  return c;
}

std::vector<Eigen::Index> parse_sizes(const std::string& text, Eigen::Index available) {
  std::vector<Eigen::Index> sizes;
  if (text.empty()) {
    for (Eigen::Index s = 20; s <= available; s += 20) sizes.push_back(s);
    if (sizes.empty()) sizes.push_back(available);
    return sizes;
  }
  const auto to_index = [&](const std::string& s) {
    double v = 0.0;
    if (!io::detail::parse_double(s, v) || v != static_cast<double>(static_cast<Eigen::Index>(v)) || v < 1)
      throw InvalidArgument("bad size '" + s + "' in --sizes");
    return static_cast<Eigen::Index>(v);
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidArgument("--sizes range must be first:last:step");
    const Eigen::Index a = to_index(parts[0]), b = to_index(parts[1]), step = to_index(parts[2]);
    for (Eigen::Index s = a; s <= b; s += step) sizes.push_back(s);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) sizes.push_back(to_index(p));
  }
  if (sizes.empty()) throw InvalidArgument("--sizes is empty");
  return sizes;
}

std::vector<std::string> methods_or(const Options& o, std::vector<std::string> fallback) {
  return o.methods.empty() ? fallback : o.methods;
}

std::string out_file(const Options& o, const std::string& name) { return (fs::path(o.out) / name).string(); }

std::vector<Eigen::Index> modes_for(const Options& o, Eigen::Index rank) {
  std::vector<Eigen::Index> modes;
  if (o.all_modes) {
    for (Eigen::Index j = 1; j <= rank; ++j) modes.push_back(j);
  } else {
    if (o.mode < 1 || o.mode > rank)
      throw InvalidArgument("--mode " + std::to_string(o.mode) + " outside [1, " + std::to_string(rank) + "]");
    modes.push_back(o.mode);
  }
  return modes;
}

/// Modal coefficients of the dataset and the gradient samples of one mode.
struct ModeData {
  PodBasis basis;
  ModalCoefficients coefficients;
  ParameterSamples x_ref;
};

ModeData mode_data(const Options& o, const Dataset& d) {
  ModeData m{truncate(compute_pod(d.data, o.center).basis, truncation_for(o, &d)), {},
             to_reference(d.space, d.data.params())};
  m.coefficients = project(m.basis, d.data);
  return m;
}

GradientSamples mode_gradients(const Options& o, const Dataset& d, const ModeData& m, Eigen::Index j) {
  const GradientMethod g = gradients_for(o, d);
  const Eigen::VectorXd c = m.coefficients.row(j).transpose();
  if (g != GradientMethod::Analytic) return estimate_gradients(m.x_ref, c, GradientStrategy{g, {}});
  const Eigen::VectorXd mode = m.basis.modes.col(j);
  return estimate_gradients(m.x_ref, c,
                            GradientStrategy{g, [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                                               return d.jacobian(x).transpose() * mode;
                                             }});
}

void write_eigenvalues(const std::string& path, const Eigen::VectorXd& lambda) {
  Eigen::MatrixXd rows(lambda.size(), 3);
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    rows.row(i) << double(i + 1), lambda[i], lambda[0] > 0.0 ? lambda[i] / lambda[0] : 0.0;
  io::write_csv(path, {"index", "eigenvalue", "normalized_eigenvalue"}, rows);
}

// CSV rows mixing text and numbers.
void write_report(const std::string& path, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f = io::open_out(path);
  f << join(header) << '\n';
  for (const auto& r : rows) f << join(r) << '\n';
}

// --- subcommands -----------------------------------------------------------

void cmd_gen(const Options& o) {
  prepare_out(o.out);
  if (o.preset.empty()) throw InvalidArgument("gen needs --preset");
  PresetInfo info = make_preset(parse_preset(o.preset), o.seed);
  if (o.samples > 0) info.samples = o.samples;
  const SnapshotSet data = preset_dataset(info);
  io::save_snapshots(out_file(o, o.binary ? "snapshots.rsnp" : "snapshots.csv"), data.fields(), o.binary);
  io::write_params_csv(out_file(o, "params.csv"), data.params());
  io::write_space_csv(out_file(o, "space.csv"), info.problem.space);
  write_manifest(o, "gen");
  std::cout << "wrote " << data.count() << " snapshots of " << data.dofs() << " dofs to " << o.out << '\n';
}

void cmd_pod(const Options& o) {
  prepare_out(o.out);
  Eigen::MatrixXd fields;
  std::optional<Dataset> d;
  if (!o.preset.empty()) {
    d = load_dataset(o);
    fields = d->data.fields();
  } else {
    if (o.snapshots.empty()) throw InvalidArgument("pod needs --snapshots FILE or --preset NAME");
    fields = io::load_snapshots(o.snapshots);
  }
  const PodDecomposition pod = compute_pod(fields, o.center);
  const PodBasis basis = truncate(pod.basis, truncation_for(o, d ? &*d : nullptr));
  const Eigen::VectorXd& sv = pod.basis.singular_values;
  const Eigen::VectorXd decay = singular_value_decay(sv);
  Eigen::MatrixXd svrows(sv.size(), 2), decrows(sv.size(), 2);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    svrows.row(i) << double(i + 1), sv[i];
    decrows.row(i) << double(i + 1), decay[i];
  }
  io::write_csv(out_file(o, "singular_values.csv"), {"index", "singular_value"}, svrows);
  io::write_csv(out_file(o, "decay.csv"), {"index", "normalized_singular_value"}, decrows);
  if (o.binary) {
    auto f = io::open_out(out_file(o, "modes.rsnp"), std::ios::binary);
    io::write_rsnp(f, basis.modes);
  } else {
    io::write_csv(out_file(o, "modes.csv"), io::numbered_header("phi_", basis.rank()), basis.modes);
  }
  io::write_csv(out_file(o, "coefficients.csv"), io::numbered_header("alpha_", basis.rank()),
                project(basis, fields).transpose());
  const TruncationError err = truncation_error(sv, basis.rank());
  Eigen::MatrixXd e(1, 3);
  e << double(basis.rank()), err.spectral, err.frobenius;
  io::write_csv(out_file(o, "truncation.csv"), {"rank", "spectral_error", "frobenius_error"}, e);
  write_manifest(o, "pod");
  std::cout << "rank " << basis.rank() << " of " << sv.size() << "\n";
}

void cmd_train(const Options& o) {
  prepare_out(o.out);
  const Dataset d = load_dataset(o);
  const auto methods = methods_or(o, {"full-rbf"});
  if (methods.size() != 1) throw InvalidArgument("train takes a single --method");
  const RomConfig config = config_for(o, d, methods[0]);
  const RomModel model = train(d.data, d.space, config, d.jacobian, o.seed);
  {
    auto f = io::open_out(out_file(o, "model.romas"), std::ios::binary);
    save_model(f, model);
  }
  write_manifest(o, "train");
  std::cout << "trained " << model.regressors.size() << " modes (" << model.info.config << ")\n";
}

void cmd_predict(const Options& o) {
  prepare_out(o.out);
  if (o.model.empty()) throw InvalidArgument("predict needs --model FILE");
  RomModel model;
  {
    auto f = io::open_in(o.model, std::ios::binary);
    model = load_model(f);
  }
  ParameterSamples points;
  if (!o.mu.empty()) {
    if (!o.params.empty()) throw InvalidArgument("give either --mu or --params");
    points.values = Eigen::Map<const Eigen::VectorXd>(o.mu.data(), static_cast<Eigen::Index>(o.mu.size()));
  } else if (!o.params.empty()) {
    points = io::read_params_csv(o.params);
  } else {
    throw InvalidArgument("predict needs --mu v1,v2,... or --params FILE");
  }
  const Eigen::Index n = points.count();
  const Eigen::Index k = static_cast<Eigen::Index>(model.regressors.size());
  Eigen::MatrixXd fields(model.basis.dofs(), n);
  Eigen::MatrixXd coeffs(n, k + 2);
  for (Eigen::Index j = 0; j < n; ++j) {
    const RomPrediction p = predict(model, points.values.col(j));
    fields.col(j) = p.field;
    coeffs(j, 0) = double(j + 1);
    coeffs(j, 1) = p.out_of_bounds ? 1.0 : 0.0;
    coeffs.row(j).tail(k) = p.coefficients.transpose();
    if (p.out_of_bounds) std::cerr << "warning: point " << j + 1 << " lies outside the training box; extrapolated\n";
  }
  io::save_snapshots(out_file(o, o.binary ? "prediction.rsnp" : "prediction.csv"), fields, o.binary);
  std::vector<std::string> header = {"point", "out_of_bounds"};
  for (const auto& h : io::numbered_header("alpha_", k)) header.push_back(h);
  io::write_csv(out_file(o, "coefficients.csv"), header, coeffs);
  write_manifest(o, "predict");
}

void cmd_as(const Options& o) {
  prepare_out(o.out);
  const Dataset d = load_dataset(o);
  const ModeData m = mode_data(o, d);
  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index j : modes_for(o, m.basis.rank())) {
    const GradientSamples g = mode_gradients(o, d, m, j - 1);
    const Eigenpairs e = eigendecompose(covariance(g));
    write_eigenvalues(out_file(o, "eigenvalues_mode_" + std::to_string(j) + ".csv"), e.values);
    std::vector<std::string> header = {"axis"};
    for (const auto& h : io::numbered_header("w_", e.vectors.cols())) header.push_back(h);
    Eigen::MatrixXd vec(e.vectors.rows(), e.vectors.cols() + 1);
    for (Eigen::Index i = 0; i < vec.rows(); ++i) vec(i, 0) = double(i + 1);
    vec.rightCols(e.vectors.cols()) = e.vectors;
    io::write_csv(out_file(o, "eigenvectors_mode_" + std::to_string(j) + ".csv"), header, vec);
    const Eigen::Index gap = e.values.size() > 1 && e.values[0] > 0.0 ? select_dimension(e.values) : 0;
    const TailDiagnostic t = eigenvalue_tail_diagnostic(e.values, 1);
    std::size_t fb = 0;
    for (bool b : g.fell_back) fb += b ? 1 : 0;
    rows.push_back({std::to_string(j), std::to_string(gap), io::format_double(t.active_sum_sqrt),
                    io::format_double(t.inactive_sum_sqrt), to_string(g.method), std::to_string(fb)});
  }
  write_report(out_file(o, "active_subspace.csv"),
               {"mode", "gap_dimension", "active_sum_sqrt", "inactive_sum_sqrt", "gradients", "fallbacks"}, rows);
  write_manifest(o, "as");
}

void cmd_summary(const Options& o) {
  prepare_out(o.out);
  const Dataset d = load_dataset(o);
  const ModeData m = mode_data(o, d);
  for (Eigen::Index j : modes_for(o, m.basis.rank())) {
    const GradientSamples g = mode_gradients(o, d, m, j - 1);
    const ActiveSubspace as = compute_active_subspace(g, 1);
    write_eigenvalues(out_file(o, "eigenvalues_mode_" + std::to_string(j) + ".csv"), as.eigenvalues());
    const auto summary = sufficient_summary(m.x_ref, m.coefficients.row(j - 1).transpose(), as);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(summary.size()), 2);
    for (std::size_t i = 0; i < summary.size(); ++i)
      rows.row(static_cast<Eigen::Index>(i)) << summary[i].active, summary[i].value;
    io::write_csv(out_file(o, "summary_mode_" + std::to_string(j) + ".csv"), {"active", "coefficient"}, rows);
  }
  write_manifest(o, "summary");
}

void write_sweep(const Options& o, const std::string& prefix, const SweepResult& r) {
  std::vector<std::vector<std::string>> folds, summary;
  for (const SweepRow& row : r.folds)
    folds.push_back({std::to_string(row.n_samples), row.method, std::to_string(row.fold),
                     io::format_double(row.relative_error)});
  for (const SweepSummaryRow& row : r.summary)
    summary.push_back({std::to_string(row.n_samples), row.method, io::format_double(row.mean_error)});
  write_report(out_file(o, prefix + "_folds.csv"), {"n_samples", "method", "fold", "relative_error"}, folds);
  write_report(out_file(o, prefix + "_summary.csv"), {"n_samples", "method", "mean_error"}, summary);
  std::vector<std::vector<std::string>> configs;
  for (const CvReport& c : r.reports) configs.push_back({std::to_string(c.n_samples), c.method, c.config});
  write_report(out_file(o, prefix + "_configs.csv"), {"n_samples", "method", "config"}, configs);
}

std::vector<RomConfig> configs_for(const Options& o, const Dataset& d) {
  std::vector<RomConfig> configs;
  for (const auto& m : methods_or(o, {"full-rbf", "as-gpr"})) configs.push_back(config_for(o, d, m));
  return configs;
}

void cmd_cv(const Options& o) {
  prepare_out(o.out);
  const Dataset d = load_dataset(o);
  const SweepResult r = sample_sweep(d.data, d.space, {d.data.count()}, configs_for(o, d), o.k, o.seed, d.jacobian);
  write_sweep(o, "cv", r);
  write_manifest(o, "cv");
  for (const auto& s : r.summary) std::cout << s.method << " " << io::format_double(s.mean_error) << '\n';
}

void cmd_sweep(const Options& o) {
  prepare_out(o.out);
  const Dataset d = load_dataset(o);
  const SweepResult r = sample_sweep(d.data, d.space, parse_sizes(o.sizes, d.data.count()), configs_for(o, d),
                                     o.k, o.seed, d.jacobian);
  write_sweep(o, "sweep", r);
  write_manifest(o, "sweep");
  for (const auto& s : r.summary)
    std::cout << s.n_samples << " " << s.method << " " << io::format_double(s.mean_error) << '\n';
}

// --- option wiring ------------------------------------------------------------

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "flat key = value file; command-line flags win");
  sub->add_option("--seed", o.seed, "seed for presets, folds and subsets")->capture_default_str();
  sub->add_option("--out", o.out, "output directory")->required();
}

void add_dataset(CLI::App* sub, Options& o) {
  sub->add_option("--preset", o.preset, "synthetic dataset")->check(CLI::IsMember(preset_names()));
  sub->add_option("--snapshots", o.snapshots, "snapshot file (CSV rows or RSNP1)");
  sub->add_option("--params", o.params, "parameter CSV, one sample per row");
  sub->add_option("--space", o.space, "parameter box CSV (axis,lower,upper)");
}

void add_truncation(CLI::App* sub, Options& o) {
  auto* r = sub->add_option("--rank", o.rank, "number of POD modes")->check(CLI::PositiveNumber);
  auto* e = sub->add_option("--energy", o.energy, "retained energy fraction in (0, 1]");
  r->excludes(e);
  sub->add_flag("--center", o.center, "subtract the snapshot mean before the SVD");
}

void add_gradients(CLI::App* sub, Options& o) {
  sub->add_option("--gradients", o.gradients, "analytic (presets), local-linear or global-linear")
      ->check(CLI::IsMember({"analytic", "local-linear", "global-linear"}));
}

void add_method(CLI::App* sub, Options& o, bool many) {
  auto* m = sub->add_option("--method", o.methods, many ? "coefficient methods (comma list)" : "coefficient method")
                ->check(CLI::IsMember({"full-rbf", "as-gpr"}));
  if (many) m->delimiter(',');
  else m->expected(1);
  add_gradients(sub, o);
  sub->add_option("--kernel", o.kernel, "RBF kernel")
      ->check(CLI::IsMember({"thin-plate", "gaussian", "multiquadric"}))
      ->capture_default_str();
  sub->add_option("--shape", o.shape, "shape parameter of gaussian/multiquadric kernels")->capture_default_str();
}

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"Reduced-order models from POD with RBF or active-subspace regression"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a synthetic preset dataset");
  add_common(gen, o);
  gen->add_option("--preset", o.preset, "synthetic dataset")->required()->check(CLI::IsMember(preset_names()));
  gen->add_option("--samples", o.samples, "number of samples (default: preset size)")->check(CLI::PositiveNumber);
  gen->add_flag("--binary", o.binary, "write snapshots as RSNP1");

  auto* pod = app.add_subcommand("pod", "POD basis, singular values and decay");
  add_common(pod, o);
  add_dataset(pod, o);
  add_truncation(pod, o);
  pod->add_flag("--binary", o.binary, "write modes as RSNP1");

  auto* tr = app.add_subcommand("train", "train a model archive");
  add_common(tr, o);
  add_dataset(tr, o);
  add_truncation(tr, o);
  add_method(tr, o, false);

  auto* pr = app.add_subcommand("predict", "evaluate a model archive");
  add_common(pr, o);
  pr->add_option("--model", o.model, "model archive")->required();
  pr->add_option("--mu", o.mu, "physical parameter point, comma separated")->delimiter(',')->allow_extra_args(false);
  pr->add_option("--params", o.params, "parameter CSV of points to evaluate");
  pr->add_flag("--binary", o.binary, "write the fields as RSNP1");

  auto* as = app.add_subcommand("as", "active subspace of modal coefficients");
  auto* su = app.add_subcommand("summary", "sufficient-summary tables of modal coefficients");
  for (CLI::App* sub : {as, su}) {
    add_common(sub, o);
    add_dataset(sub, o);
    add_truncation(sub, o);
    add_gradients(sub, o);
    auto* mode = sub->add_option("--mode", o.mode, "1-based mode index")->check(CLI::PositiveNumber);
    sub->add_flag("--all-modes", o.all_modes, "every retained mode")->excludes(mode);
  }

  auto* cv = app.add_subcommand("cv", "k-fold cross-validated error");
  auto* sw = app.add_subcommand("sweep", "cross-validated error against sample count");
  for (CLI::App* sub : {cv, sw}) {
    add_common(sub, o);
    add_dataset(sub, o);
    add_truncation(sub, o);
    add_method(sub, o, true);
    sub->add_option("--k", o.k, "number of folds")->check(CLI::Range(2, 1000000))->capture_default_str();
  }
  sw->add_option("--sizes", o.sizes, "comma list or first:last:step (default 20:n:20)");

  std::vector<std::string> args(argv, argv + argc);
  args = expand_config(args);
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*gen) cmd_gen(o);
  else if (*pod) cmd_pod(o);
  else if (*tr) cmd_train(o);
  else if (*pr) cmd_predict(o);
  else if (*as) cmd_as(o);
  else if (*su) cmd_summary(o);
  else if (*cv) cmd_cv(o);
  else if (*sw) cmd_sweep(o);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const podas::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const podas::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
