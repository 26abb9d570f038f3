#include "digitsvm/cli.hpp"

#include <pthread.h>

#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "digitsvm/errors.hpp"
#include "digitsvm/eval.hpp"
#include "digitsvm/features.hpp"
#include "digitsvm/model_io.hpp"
#include "digitsvm/multiclass.hpp"
#include "digitsvm/service.hpp"

namespace digitsvm {

namespace {

std::size_t first_line_field_count(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  }
  return 0;
}

Dataset load_training_data(const std::string& path, FeatureKind kind, const FeatureScaling& scaling) {
  if (kind == FeatureKind::block64) return load_block_dataset(path, scaling.divisor);
  return load_moment_dataset(path, scaling.log_compress);
}

// Raw files follow the model; CSV files carry their own kind.
Dataset load_for_model(const std::string& path, const OvrModel& model) {
  if (looks_like_raw(path)) return load_training_data(path, model.kind, model.scaling);
  const std::size_t fields = first_line_field_count(path);
  if (fields == kMomentFeatureCount + 1) return load_moment_dataset(path, model.scaling.log_compress);
  return load_block_dataset(path, model.scaling.divisor);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

struct PrepareArgs {
  std::string raw, out, features = "block64";
};

void cmd_prepare(const PrepareArgs& a, std::ostream& out) {
  const FeatureKind kind = feature_kind_from_string(a.features);
  const RawFile raw = load_raw_file(a.raw);
  std::ostringstream text;
  if (kind == FeatureKind::block64) {
    for (const auto& rec : raw.records) text << format_preprocessed_line(downsample(rec.bitmap), rec.label) << '\n';
  } else {
    std::vector<RawBitmap> bitmaps;
    for (const auto& rec : raw.records) bitmaps.push_back(rec.bitmap);
    const auto features = moment_features_batch(bitmaps, false);
    for (std::size_t i = 0; i < features.size(); ++i) {
      write_feature_csv_line(text, features[i], raw.records[i].label);
    }
  }
  write_file(a.out, text.str());
  out << "wrote " << raw.records.size() << " records (" << a.features << ") to " << a.out << '\n';
}

struct TrainArgs {
  std::string data, model_out, kernel = "rbf", features = "block64";
  double c = 8.0, gamma = 0.03125, tol = 1e-3;
  std::size_t max_passes = 10;
  bool unscaled = false, log_compress = false;
};

FeatureScaling scaling_for(FeatureKind kind, bool unscaled, bool log_compress) {
  FeatureScaling s;
  if (kind == FeatureKind::block64) s.divisor = unscaled ? 1.0 : kBlockScaleDivisor;
  if (kind == FeatureKind::moment18) s.log_compress = log_compress;
  return s;
}

KernelSpec kernel_for(const std::string& name, double gamma) {
  const KernelKind kind = kernel_kind_from_string(name);
  return kind == KernelKind::linear ? KernelSpec::linear() : KernelSpec::rbf(gamma);
}

void cmd_train(const TrainArgs& a, std::ostream& out) {
  const FeatureKind kind = feature_kind_from_string(a.features);
  const FeatureScaling scaling = scaling_for(kind, a.unscaled, a.log_compress);
  const KernelSpec spec = kernel_for(a.kernel, a.gamma);
  TrainParams params;
  params.c = a.c;
  params.tol = a.tol;
  params.max_passes = a.max_passes;
  const Dataset data = load_training_data(a.data, kind, scaling);

  const auto start = std::chrono::steady_clock::now();
  const OvrModel model = ovr_train(data, spec, params, scaling);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  save_model(model, a.model_out);

  out << "trained one-vs-rest " << to_string(spec.kind) << " SVM on " << data.size() << " samples ("
      << to_string(kind) << ", C=" << params.c;
  if (spec.kind == KernelKind::rbf) out << ", gamma=" << spec.gamma;
  out << ")\n";
  out << "support vectors: " << model.support_vector_total() << " total, "
      << model.support_vector_unique() << " unique\n";
  for (int k = 0; k < kNumClasses; ++k) {
    out << "  class " << k << ": " << model.models[k].support_vectors.size() << '\n';
  }
  out << "training wall time: " << std::fixed << std::setprecision(3) << seconds << " s\n";
  out.unsetf(std::ios::floatfield);
  out << "model written to " << a.model_out << '\n';
}

struct TestArgs {
  std::string model, data, report;
  double eta = 0.05;
};

void cmd_test(const TestArgs& a, std::ostream& out) {
  const OvrModel model = load_model(a.model);
  const Dataset data = load_for_model(a.data, model);
  const EvaluationReport report = evaluate(model, data, a.eta);
  if (!a.report.empty()) write_file(a.report, report_to_json(report));

  out << std::fixed << std::setprecision(2);
  out << "accuracy: " << 100.0 * report.accuracy << "% (" << report.confusion.trace() << "/"
      << report.samples << ")\n";
  out << "per-class recognition rates:\n";
  for (int k = 0; k < kNumClasses; ++k) {
    out << "  digit " << k << ": ";
    if (report.per_class[k]) {
      out << 100.0 * *report.per_class[k] << "% (" << report.confusion.counts[k][k] << "/"
          << report.confusion.row_sum(k) << ")\n";
    } else {
      out << "n/a (no samples)\n";
    }
  }
  out << std::setprecision(4);
  out << "risk bound: r_emp=" << report.risk.r_emp << " phi=" << report.risk.phi
      << " bound=" << report.risk.bound << " (h=" << report.bound_inputs.h
      << ", l=" << report.bound_inputs.l << ", eta=" << report.bound_inputs.eta << ")\n";
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
  if (!a.report.empty()) out << "report written to " << a.report << '\n';
}

struct GridArgs {
  std::string data, kernel = "rbf", features = "block64", out_json;
  std::vector<double> c_values, gamma_values;
  int folds = 5;
  std::uint64_t seed = 1;
  double tol = 1e-3;
  bool unscaled = false, log_compress = false;
};

void cmd_grid(const GridArgs& a, std::ostream& out) {
  const FeatureKind kind = feature_kind_from_string(a.features);
  const KernelKind kernel = kernel_kind_from_string(a.kernel);
  const Dataset data = load_training_data(a.data, kind, scaling_for(kind, a.unscaled, a.log_compress));
  GridSpec grid = GridSpec::default_grid();
  if (!a.c_values.empty()) grid.c_values = a.c_values;
  if (!a.gamma_values.empty()) grid.gamma_values = a.gamma_values;
  grid.folds = a.folds;
  grid.fold_seed = a.seed;
  TrainParams params;
  params.tol = a.tol;
  const GridResult result = grid_search(data, kernel, grid, params);
  if (!a.out_json.empty()) write_file(a.out_json, grid_to_json(result));

  out << a.folds << "-fold cross-validation, " << data.size() << " samples, seed " << a.seed << '\n';
  for (const auto& cell : result.table) {
    out << "C=" << cell.c;
    if (kernel == KernelKind::rbf) out << " gamma=" << cell.gamma;
    out << "  ";
    if (cell.valid) {
      out << std::fixed << std::setprecision(2) << 100.0 * cell.accuracy << "%";
      out.unsetf(std::ios::floatfield);
      out << std::setprecision(6);
    } else {
      out << "invalid";
    }
    out << '\n';
  }
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << "best: C=" << result.best_c;
  if (kernel == KernelKind::rbf) out << " gamma=" << result.best_gamma;
  out << " cv accuracy " << std::fixed << std::setprecision(2) << 100.0 * result.cv_accuracy << "%\n";
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

struct ClassifyArgs {
  std::string model, bitmap;
};

void cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  const OvrModel model = load_model(a.model);
  std::ifstream in(a.bitmap);
  if (!in) throw std::runtime_error("cannot open '" + a.bitmap + "'");
  const RawBitmap bitmap = parse_bitmap(in);
  const Prediction p = ovr_predict(model, bitmap_features(model, bitmap));
  out << "label: " << p.label << '\n' << "scores:\n";
  for (int k = 0; k < kNumClasses; ++k) out << "  " << k << " " << p.scores[k] << '\n';
}

struct ServeArgs {
  std::string model, host = "127.0.0.1", ui;
  int port = 8080;
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  ClassifyService service(load_model(a.model), a.ui);
  if (!service.bind(a.host, a.port)) {
    err << "error: cannot bind " << a.host << ":" << a.port << " (port busy or unavailable)\n";
    return kExitData;
  }
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  out << "serving on http://" << a.host << ":" << a.port << "/ (" << (service.serves_ui_dir() ? a.ui : "built-in page")
      << ")" << std::endl;
  const bool ok = service.listen();
  pthread_kill(watcher.native_handle(), SIGUSR1);
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "service stopped" << std::endl;
  return ok ? kExitOk : kExitData;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Handwritten digit recognition with support vector machines", "digitsvm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "digitsvm 1.0");

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "Downsample raw 32x32 bitmaps into 8x8 block-count CSV");
  prepare->add_option("raw", prep.raw, "Raw bitmap file")->required();
  prepare->add_option("out", prep.out, "Output CSV")->required();
  prepare->add_option("--features", prep.features, "block64 or moment18")
      ->check(CLI::IsMember({"block64", "moment18"}))
      ->capture_default_str();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train a one-vs-rest SVM");
  train->add_option("data", tr.data, "Training data (raw bitmaps or CSV)")->required();
  train->add_option("-o,--model-out", tr.model_out, "Model file to write")->required();
  train->add_option("--kernel", tr.kernel, "rbf or linear")
      ->check(CLI::IsMember({"rbf", "linear"}))
      ->capture_default_str();
  train->add_option("-c,--c", tr.c, "Soft-margin penalty C")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("-g,--gamma", tr.gamma, "RBF gamma")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--tol", tr.tol, "KKT tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--max-passes", tr.max_passes, "Iteration budget multiplier")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--features", tr.features, "block64 or moment18")
      ->check(CLI::IsMember({"block64", "moment18"}))
      ->capture_default_str();
  train->add_flag("--unscaled", tr.unscaled, "Use raw block counts 0-16 instead of dividing by 16");
  train->add_flag("--log-compress", tr.log_compress, "sign(v) log(1+|v|) on moment features");

  TestArgs te;
  auto* test = app.add_subcommand("test", "Evaluate a model and write the report document");
  test->add_option("model", te.model, "Model file")->required();
  test->add_option("data", te.data, "Test data (raw bitmaps or CSV)")->required();
  test->add_option("-r,--report", te.report, "Report JSON to write");
  test->add_option("--eta", te.eta, "Confidence parameter of the risk bound")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  GridArgs gr;
  auto* grid = app.add_subcommand("grid", "Cross-validated grid search over C and gamma");
  grid->add_option("data", gr.data, "Training data (raw bitmaps or CSV)")->required();
  grid->add_option("--kernel", gr.kernel, "rbf or linear")
      ->check(CLI::IsMember({"rbf", "linear"}))
      ->capture_default_str();
  grid->add_option("--c-values", gr.c_values, "Comma-separated C values (default 2^-1..2^7)")
      ->delimiter(',');
  grid->add_option("--gamma-values", gr.gamma_values, "Comma-separated gamma values (default 2^-9..2^1)")
      ->delimiter(',');
  grid->add_option("--folds", gr.folds, "Number of folds")->check(CLI::Range(2, 100))->capture_default_str();
  grid->add_option("--seed", gr.seed, "Fold assignment seed")->capture_default_str();
  grid->add_option("--tol", gr.tol, "KKT tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  grid->add_option("--features", gr.features, "block64 or moment18")
      ->check(CLI::IsMember({"block64", "moment18"}))
      ->capture_default_str();
  grid->add_flag("--unscaled", gr.unscaled, "Use raw block counts 0-16");
  grid->add_flag("--log-compress", gr.log_compress, "sign(v) log(1+|v|) on moment features");
  grid->add_option("--out", gr.out_json, "Grid table JSON to write");

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "Classify one 32x32 bitmap");
  classify->add_option("model", cl.model, "Model file")->required();
  classify->add_option("bitmap", cl.bitmap, "File with 32 lines of 32 '0'/'1' characters")->required();

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Run the HTTP classify service");
  serve->add_option("model", sv.model, "Model file")->required();
  serve->add_option("-p,--port", sv.port, "TCP port")->check(CLI::Range(0, 65535))->capture_default_str();
  serve->add_option("--host", sv.host, "Bind address")->capture_default_str();
  serve->add_option("--ui", sv.ui, "Directory with the UI bundle (index.html)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*prepare) cmd_prepare(prep, out);
    if (*train) cmd_train(tr, out);
    if (*test) cmd_test(te, out);
    if (*grid) cmd_grid(gr, out);
    if (*classify) cmd_classify(cl, out);
    if (*serve) return cmd_serve(sv, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace digitsvm
