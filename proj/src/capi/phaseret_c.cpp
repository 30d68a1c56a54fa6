#include "phaseret/phaseret.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "phaseret/bpnn/checkpoint.hpp"
#include "phaseret/datasets/io.hpp"
#include "phaseret/harness/config.hpp"
#include "phaseret/harness/experiment.hpp"
#include "phaseret/harness/report.hpp"

struct pr_config {
  phaseret::harness::ExperimentConfig value;
};

struct pr_dataset {
  phaseret::datasets::SpectralDataset value;
};

struct pr_results {
  phaseret::harness::ResultsTable value;
};

struct pr_model {
  phaseret::bpnn::BpnnCheckpoint checkpoint;
  phaseret::bpnn::BpnnLayout layout;
};

namespace {

using phaseret::Errc;

thread_local std::string g_last_error;

pr_status to_status(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return PR_ERR_INVALID_ARGUMENT;
    case Errc::dimension_mismatch: return PR_ERR_DIMENSION;
    case Errc::pole: return PR_ERR_POLE;
    case Errc::domain: return PR_ERR_DOMAIN;
    case Errc::not_ready: return PR_ERR_NOT_READY;
    case Errc::diverged: return PR_ERR_DIVERGED;
    case Errc::parse: return PR_ERR_PARSE;
    case Errc::io: return PR_ERR_IO;
  }
  return PR_ERR_INTERNAL;
}

pr_status set_error(pr_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
pr_status guarded(F&& body) {
  try {
    body();
    return PR_OK;
  } catch (const phaseret::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PR_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PR_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) phaseret::fail(Errc::invalid_argument, std::string(what) + " must not be NULL");
}

phaseret::harness::ProgressFn wrap(pr_progress_fn fn, void* user) {
  if (fn == nullptr) return {};
  return [fn, user](const std::string& line) { fn(line.c_str(), user); };
}

std::unique_ptr<pr_model> make_model(phaseret::bpnn::BpnnCheckpoint checkpoint) {
  phaseret::bpnn::BpnnLayout layout(checkpoint.omegas, checkpoint.config.roots, checkpoint.config.segments);
  return std::unique_ptr<pr_model>(new pr_model{std::move(checkpoint), std::move(layout)});
}

}  // namespace

extern "C" {

const char* pr_version(void) { return "0.1.0"; }

const char* pr_last_error(void) { return g_last_error.c_str(); }

const char* pr_status_name(pr_status status) {
  switch (status) {
    case PR_OK: return "ok";
    case PR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PR_ERR_DIMENSION: return "dimension mismatch";
    case PR_ERR_POLE: return "pole";
    case PR_ERR_DOMAIN: return "domain error";
    case PR_ERR_NOT_READY: return "not ready";
    case PR_ERR_DIVERGED: return "diverged";
    case PR_ERR_PARSE: return "parse error";
    case PR_ERR_IO: return "i/o error";
    case PR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pr_status pr_config_load(const char* path, pr_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto c = std::make_unique<pr_config>(pr_config{phaseret::harness::load_config(path)});
    *out = c.release();
  });
}

pr_status pr_config_parse(const char* json_text, pr_config** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = nullptr;
    auto c = std::make_unique<pr_config>(pr_config{phaseret::harness::parse_config(json_text)});
    *out = c.release();
  });
}

pr_status pr_config_default(const char* methods, pr_config** out) {
  return guarded([&] {
    need(methods, "methods");
    need(out, "out");
    *out = nullptr;
    auto c = std::make_unique<pr_config>();
    std::stringstream list(methods);
    std::string name;
    while (std::getline(list, name, ',')) {
      if (!name.empty()) c->value.methods.push_back(phaseret::harness::parse_method(name));
    }
    *out = c.release();
  });
}

void pr_config_free(pr_config* config) { delete config; }

pr_status pr_config_set_seed(pr_config* config, uint64_t seed) {
  return guarded([&] {
    need(config, "config");
    config->value.seed = seed;
  });
}

pr_status pr_config_set_output_dir(pr_config* config, const char* dir) {
  return guarded([&] {
    need(config, "config");
    need(dir, "dir");
    config->value.output_dir = dir;
  });
}

pr_status pr_config_set_jobs(pr_config* config, size_t jobs) {
  return guarded([&] {
    need(config, "config");
    phaseret::require(jobs >= 1, Errc::invalid_argument, "jobs must be at least 1");
    config->value.jobs = jobs;
  });
}

pr_status pr_config_set_generator(pr_config* config, const char* name) {
  return guarded([&] {
    need(config, "config");
    need(name, "name");
    const std::string g = name;
    phaseret::require(g == "lorentzian" || g == "ode", Errc::invalid_argument,
                      "unknown generator '" + g + "' (expected lorentzian or ode)");
    auto& d = config->value.dataset;
    d.generator = g;
    d.train_file.clear();
    d.test_file.clear();
  });
}

size_t pr_config_output_dir(const pr_config* config, char* buf, size_t size) {
  if (config == nullptr) return 0;
  const std::string dir = config->value.output_dir.string();
  if (buf != nullptr && size > 0) {
    const size_t n = std::min(size - 1, dir.size());
    std::memcpy(buf, dir.data(), n);
    buf[n] = '\0';
  }
  return dir.size();
}

pr_status pr_dataset_from_config(const pr_config* config, pr_dataset** train, pr_dataset** test) {
  return guarded([&] {
    need(config, "config");
    need(train, "train");
    need(test, "test");
    *train = *test = nullptr;
    auto split = phaseret::harness::load_experiment_data(config->value);
    auto a = std::make_unique<pr_dataset>(pr_dataset{std::move(split.train)});
    auto b = std::make_unique<pr_dataset>(pr_dataset{std::move(split.test)});
    *train = a.release();
    *test = b.release();
  });
}

pr_status pr_dataset_load(const char* path, pr_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto d = std::make_unique<pr_dataset>(pr_dataset{phaseret::datasets::load_spectral_file(path)});
    *out = d.release();
  });
}

pr_status pr_dataset_save(const pr_dataset* data, const char* path) {
  return guarded([&] {
    need(data, "data");
    need(path, "path");
    phaseret::datasets::save_dataset(path, data->value);
  });
}

void pr_dataset_free(pr_dataset* data) { delete data; }

size_t pr_dataset_num_samples(const pr_dataset* data) { return data == nullptr ? 0 : data->value.num_samples(); }

size_t pr_dataset_num_freqs(const pr_dataset* data) { return data == nullptr ? 0 : data->value.num_freqs(); }

pr_status pr_dataset_omegas(const pr_dataset* data, double* out) {
  return guarded([&] {
    need(data, "data");
    need(out, "out");
    std::copy(data->value.omegas.begin(), data->value.omegas.end(), out);
  });
}

pr_status pr_dataset_sample(const pr_dataset* data, size_t row, double* re, double* im) {
  return guarded([&] {
    need(data, "data");
    need(re, "re");
    need(im, "im");
    phaseret::require(row < data->value.num_samples(), Errc::invalid_argument, "sample row out of range");
    for (size_t i = 0; i < data->value.num_freqs(); ++i) {
      const auto v = data->value.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i));
      re[i] = v.real();
      im[i] = v.imag();
    }
  });
}

pr_status pr_experiment_run(const pr_config* config, pr_progress_fn progress, void* user, pr_results** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<pr_results>(pr_results{phaseret::harness::run_experiment(config->value, wrap(progress, user))});
    *out = r.release();
  });
}

pr_status pr_experiment_write(const pr_config* config, const pr_results* results) {
  return guarded([&] {
    need(config, "config");
    need(results, "results");
    phaseret::harness::write_experiment_outputs(config->value, results->value);
  });
}

int pr_config_has_piecewise_sweep(const pr_config* config) {
  return config != nullptr && config->value.piecewise_sweep.has_value() ? 1 : 0;
}

pr_status pr_piecewise_sweep_run(const pr_config* config, pr_progress_fn progress, void* user) {
  return guarded([&] {
    need(config, "config");
    const auto& c = config->value;
    phaseret::require(c.piecewise_sweep.has_value(), Errc::invalid_argument, "config has no piecewise_sweep block");
    c.validate();
    const auto data = phaseret::harness::load_experiment_data(c);
    const auto table = phaseret::harness::piecewise_hparam_sweep(c, *c.piecewise_sweep, data, wrap(progress, user));
    std::filesystem::create_directories(c.output_dir);
    phaseret::harness::save_heatmap_csv(c.output_dir / "heatmap.csv", table);
    phaseret::harness::save_heatmap_svg(c.output_dir / "heatmap.svg", table);
  });
}

pr_status pr_train(const pr_config* config, const char* method, size_t train_size, uint64_t seed, pr_results** rows,
                   pr_model** model) {
  return guarded([&] {
    need(config, "config");
    need(method, "method");
    need(rows, "rows");
    *rows = nullptr;
    if (model != nullptr) *model = nullptr;
    const auto m = phaseret::harness::parse_method(method);
    const auto data = phaseret::harness::load_experiment_data(config->value);
    auto run = phaseret::harness::run_single(config->value, data, m, train_size, seed);
    std::unique_ptr<pr_model> trained;
    if (model != nullptr && run.model) {
      trained = make_model({run.model->config, run.model->layout.omegas, run.model->training.best_params});
    }
    auto r = std::make_unique<pr_results>(pr_results{std::move(run.rows)});
    *rows = r.release();
    if (model != nullptr) *model = trained.release();
  });
}

pr_status pr_results_load_csv(const char* path, pr_results** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<pr_results>(pr_results{phaseret::harness::load_results_csv(path)});
    *out = r.release();
  });
}

pr_status pr_results_save_csv(const pr_results* results, const char* path) {
  return guarded([&] {
    need(results, "results");
    need(path, "path");
    phaseret::harness::save_results_csv(path, results->value);
  });
}

pr_status pr_results_save_svg(const pr_results* results, const char* path, const char* title) {
  return guarded([&] {
    need(results, "results");
    need(path, "path");
    phaseret::harness::save_results_svg(path, results->value, title != nullptr ? title : "Test MSE");
  });
}

size_t pr_results_num_rows(const pr_results* results) { return results == nullptr ? 0 : results->value.size(); }

double pr_results_best_mse(const pr_results* results, size_t row) {
  if (results == nullptr || row >= results->value.size()) return std::numeric_limits<double>::quiet_NaN();
  return results->value[row].best_mse;
}

void pr_results_free(pr_results* results) { delete results; }

pr_status pr_model_save(const pr_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    phaseret::bpnn::save_checkpoint(path, model->checkpoint);
  });
}

pr_status pr_model_load(const char* path, pr_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = make_model(phaseret::bpnn::load_checkpoint(path)).release();
  });
}

size_t pr_model_num_freqs(const pr_model* model) { return model == nullptr ? 0 : model->checkpoint.omegas.size(); }

pr_status pr_model_predict(const pr_model* model, const double* magnitudes, size_t n, double* re, double* im) {
  return guarded([&] {
    need(model, "model");
    need(magnitudes, "magnitudes");
    need(re, "re");
    need(im, "im");
    phaseret::require(n == model->checkpoint.omegas.size(), Errc::dimension_mismatch,
                      "magnitude count does not match the model's frequency grid");
    const auto out = phaseret::bpnn::bpnn_forward(model->checkpoint.params, {magnitudes, n}, model->layout);
    for (size_t i = 0; i < out.size(); ++i) {
      re[i] = out[i].real();
      im[i] = out[i].imag();
    }
  });
}

void pr_model_free(pr_model* model) { delete model; }

}  // extern "C"
