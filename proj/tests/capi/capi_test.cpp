// Exercises the public C interface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <phaseret/phaseret.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

const char* kConfig = R"({
  "dataset": {"generator": "ode", "n_train": 5, "n_test": 3, "n_freq": 10},
  "train_sizes": [2, 4],
  "methods": ["bpnn", "kk"],
  "seeds": 1,
  "bpnn": {"hidden": [8], "epochs": 10}
})";

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "phaseret_capi_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strlen(pr_version()) > 0);
  CHECK(std::string(pr_status_name(PR_OK)) == "ok");
  CHECK(std::string(pr_status_name(PR_ERR_PARSE)) == "parse error");
}

TEST_CASE("null arguments are rejected with a message") {
  pr_config* c = nullptr;
  CHECK(pr_config_parse(nullptr, &c) == PR_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(pr_last_error()) > 0);
  CHECK(pr_dataset_num_samples(nullptr) == 0);
  CHECK(std::isnan(pr_results_best_mse(nullptr, 0)));
  pr_config_free(nullptr);
  pr_dataset_free(nullptr);
  pr_results_free(nullptr);
  pr_model_free(nullptr);
}

TEST_CASE("errors map onto status codes") {
  pr_config* c = nullptr;
  CHECK(pr_config_parse("{oops", &c) == PR_ERR_PARSE);
  CHECK(c == nullptr);
  CHECK(pr_config_load("/definitely/not/here.json", &c) == PR_ERR_IO);
  CHECK(pr_config_default("bpnn,nope", &c) == PR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config overrides") {
  pr_config* c = nullptr;
  REQUIRE(pr_config_parse(kConfig, &c) == PR_OK);
  CHECK(pr_config_set_output_dir(c, "some/dir") == PR_OK);
  char buf[4];
  CHECK(pr_config_output_dir(c, buf, sizeof buf) == 8);
  CHECK(std::string(buf) == "som");
  CHECK(pr_config_set_jobs(c, 0) == PR_ERR_INVALID_ARGUMENT);
  CHECK(pr_config_set_generator(c, "magic") == PR_ERR_INVALID_ARGUMENT);
  CHECK(pr_config_has_piecewise_sweep(c) == 0);
  pr_config_free(c);
}

TEST_CASE("datasets through the C interface") {
  pr_config* c = nullptr;
  REQUIRE(pr_config_parse(kConfig, &c) == PR_OK);
  pr_dataset *train = nullptr, *test = nullptr;
  REQUIRE(pr_dataset_from_config(c, &train, &test) == PR_OK);
  CHECK(pr_dataset_num_samples(train) == 5);
  CHECK(pr_dataset_num_samples(test) == 3);
  REQUIRE(pr_dataset_num_freqs(train) == 10);
  std::vector<double> w(10), re(10), im(10);
  CHECK(pr_dataset_omegas(train, w.data()) == PR_OK);
  CHECK(w.front() > 0.0);
  CHECK(pr_dataset_sample(train, 1, re.data(), im.data()) == PR_OK);
  CHECK(pr_dataset_sample(train, 5, re.data(), im.data()) == PR_ERR_INVALID_ARGUMENT);

  const auto path = (scratch() / "train.csv").string();
  REQUIRE(pr_dataset_save(train, path.c_str()) == PR_OK);
  pr_dataset* back = nullptr;
  REQUIRE(pr_dataset_load(path.c_str(), &back) == PR_OK);
  std::vector<double> re2(10), im2(10);
  pr_dataset_sample(back, 1, re2.data(), im2.data());
  CHECK(re2 == re);
  CHECK(im2 == im);
  pr_dataset_free(back);
  pr_dataset_free(train);
  pr_dataset_free(test);
  pr_config_free(c);
}

TEST_CASE("experiment, results and model round trip") {
  pr_config* c = nullptr;
  REQUIRE(pr_config_parse(kConfig, &c) == PR_OK);
  const auto dir = scratch() / "run";
  pr_config_set_output_dir(c, dir.string().c_str());
  int lines = 0;
  pr_results* results = nullptr;
  REQUIRE(pr_experiment_run(c, [](const char*, void* user) { ++*static_cast<int*>(user); }, &lines, &results) == PR_OK);
  CHECK(lines > 0);
  CHECK(pr_results_num_rows(results) == 4);
  REQUIRE(pr_experiment_write(c, results) == PR_OK);
  pr_results* loaded = nullptr;
  REQUIRE(pr_results_load_csv((dir / "results.csv").string().c_str(), &loaded) == PR_OK);
  CHECK(pr_results_num_rows(loaded) == 4);
  CHECK(pr_results_best_mse(loaded, 0) == pr_results_best_mse(results, 0));
  CHECK(pr_results_save_svg(loaded, (dir / "again.svg").string().c_str(), nullptr) == PR_OK);

  pr_results* rows = nullptr;
  pr_model* model = nullptr;
  REQUIRE(pr_train(c, "bpnn", 3, 1, &rows, &model) == PR_OK);
  REQUIRE(model != nullptr);
  CHECK(pr_results_num_rows(rows) == 1);
  const auto ckpt = (dir / "model.ckpt").string();
  REQUIRE(pr_model_save(model, ckpt.c_str()) == PR_OK);
  pr_model* reloaded = nullptr;
  REQUIRE(pr_model_load(ckpt.c_str(), &reloaded) == PR_OK);
  REQUIRE(pr_model_num_freqs(reloaded) == 10);
  std::vector<double> mags(10, 0.7), re(10), im(10), re2(10), im2(10);
  CHECK(pr_model_predict(model, mags.data(), 10, re.data(), im.data()) == PR_OK);
  CHECK(pr_model_predict(reloaded, mags.data(), 10, re2.data(), im2.data()) == PR_OK);
  CHECK(re == re2);
  CHECK(im == im2);
  for (std::size_t i = 0; i < 10; ++i) CHECK(std::hypot(re[i], im[i]) == doctest::Approx(0.7));
  CHECK(pr_model_predict(model, mags.data(), 9, re.data(), im.data()) == PR_ERR_DIMENSION);

  pr_results* kk_rows = nullptr;
  pr_model* kk_model = nullptr;
  REQUIRE(pr_train(c, "kk", 3, 1, &kk_rows, &kk_model) == PR_OK);
  CHECK(kk_model == nullptr);

  pr_results_free(kk_rows);
  pr_model_free(reloaded);
  pr_model_free(model);
  pr_results_free(rows);
  pr_results_free(loaded);
  pr_results_free(results);
  pr_config_free(c);
  std::filesystem::remove_all(scratch());
}
