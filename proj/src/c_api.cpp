#include "chaosclt/chaosclt.h"

#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "chaosclt/bounds.hpp"
#include "chaosclt/chaos.hpp"
#include "chaosclt/errors.hpp"
#include "chaosclt/experiments.hpp"
#include "chaosclt/kernel_io.hpp"

using namespace chaosclt;

struct cclt_kernel {
  Kernel value;
};

struct cclt_chaos {
  std::size_t dim;
  std::map<int, Kernel> kernels;
  mutable std::optional<ChaosSum> built;

  const ChaosSum& sum() const {
    if (!built) built.emplace(dim, kernels);
    return *built;
  }
};

struct cclt_result {
  std::vector<OutputFile> files;
  std::string output_dir;
};

namespace {

thread_local std::string last_error;

template <class F>
cclt_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CCLT_OK;
  } catch (const UnsupportedRepresentation& e) {
    last_error = e.what();
    return CCLT_ERR_UNSUPPORTED;
  } catch (const DomainError& e) {
    last_error = e.what();
    return CCLT_ERR_VALIDATION;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return CCLT_ERR_VALIDATION;
  } catch (const NumericalError& e) {
    last_error = e.what();
    return CCLT_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CCLT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CCLT_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw DomainError(std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* cclt_version(void) { return CHAOSCLT_VERSION; }

const char* cclt_last_error(void) { return last_error.c_str(); }

void cclt_string_free(char* text) { std::free(text); }

cclt_status cclt_kernel_dense_create(int order, size_t dim, const double* values, size_t count,
                                     cclt_kernel** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(values, "values");
    std::vector<double> data(values, values + count);
    *out = new cclt_kernel{DenseKernel(order, dim, std::move(data))};
  });
}

cclt_status cclt_kernel_rank_one_create(int order, size_t dim, size_t terms,
                                        const double* coefficients, const double* vectors,
                                        int stationary, cclt_kernel** out) {
  return guarded([&] {
    require(out, "out");
    if (terms > 0) {
      require(coefficients, "coefficients");
      require(vectors, "vectors");
    }
    std::vector<RankOneSumKernel::Term> list;
    list.reserve(terms);
    for (size_t i = 0; i < terms; ++i) {
      list.push_back({coefficients[i], std::vector<double>(vectors + i * dim, vectors + (i + 1) * dim)});
    }
    *out = new cclt_kernel{RankOneSumKernel(order, dim, std::move(list), stationary != 0)};
  });
}

cclt_status cclt_kernel_parse(const char* text, cclt_kernel** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new cclt_kernel{parse_kernel(text)};
  });
}

cclt_status cclt_kernel_serialize(const cclt_kernel* kernel, char** out_text) {
  return guarded([&] {
    require(kernel, "kernel");
    require(out_text, "out_text");
    *out_text = copy_string(serialize_kernel(kernel->value));
  });
}

void cclt_kernel_free(cclt_kernel* kernel) { delete kernel; }

int cclt_kernel_order(const cclt_kernel* kernel) { return kernel ? order(kernel->value) : -1; }

size_t cclt_kernel_dim(const cclt_kernel* kernel) { return kernel ? dim(kernel->value) : 0; }

cclt_status cclt_kernel_norm(const cclt_kernel* kernel, double* out) {
  return guarded([&] {
    require(kernel, "kernel");
    require(out, "out");
    *out = norm(kernel->value);
  });
}

cclt_status cclt_kernel_contraction_norm(const cclt_kernel* kernel, int r, double* out) {
  return guarded([&] {
    require(kernel, "kernel");
    require(out, "out");
    *out = contraction_norm(kernel->value, r);
  });
}

cclt_status cclt_kernel_mixed_inner(const cclt_kernel* fp, const cclt_kernel* fq, double* out) {
  return guarded([&] {
    require(fp, "fp");
    require(fq, "fq");
    require(out, "out");
    *out = mixed_inner(fp->value, fq->value);
  });
}

cclt_status cclt_chaos_create(size_t dim, cclt_chaos** out) {
  return guarded([&] {
    require(out, "out");
    if (dim == 0) throw DomainError("chaos dimension must be positive");
    *out = new cclt_chaos{dim, {}, std::nullopt};
  });
}

cclt_status cclt_chaos_add(cclt_chaos* chaos, const cclt_kernel* kernel) {
  return guarded([&] {
    require(chaos, "chaos");
    require(kernel, "kernel");
    const int p = order(kernel->value);
    if (dim(kernel->value) != chaos->dim) throw DomainError("kernel dimension does not match the chaos sum");
    if (chaos->kernels.count(p)) throw DomainError("chaos order " + std::to_string(p) + " already present");
    // Validate eagerly so that a bad kernel is refused at the point of entry.
    std::map<int, Kernel> next = chaos->kernels;
    next.emplace(p, kernel->value);
    ChaosSum candidate(chaos->dim, next);
    chaos->kernels = std::move(next);
    chaos->built.emplace(std::move(candidate));
  });
}

void cclt_chaos_free(cclt_chaos* chaos) { delete chaos; }

cclt_status cclt_chaos_second_moment(const cclt_chaos* chaos, double* out) {
  return guarded([&] {
    require(chaos, "chaos");
    require(out, "out");
    *out = second_moment(chaos->sum());
  });
}

cclt_status cclt_chaos_sample(const cclt_chaos* chaos, const double* z, size_t dim, double* out) {
  return guarded([&] {
    require(chaos, "chaos");
    require(z, "z");
    require(out, "out");
    *out = sample(chaos->sum(), std::span<const double>(z, dim));
  });
}

cclt_status cclt_chaos_sample_batch(const cclt_chaos* chaos, size_t replicas, uint64_t seed,
                                    unsigned threads, double* out) {
  return guarded([&] {
    require(chaos, "chaos");
    if (replicas > 0) require(out, "out");
    const std::vector<double> values = sample_batch(chaos->sum(), replicas, seed, threads);
    std::copy(values.begin(), values.end(), out);
  });
}

cclt_status cclt_chaos_bound_json(const cclt_chaos* chaos, double constant_multiplier,
                                  char** out_json) {
  return guarded([&] {
    require(chaos, "chaos");
    require(out_json, "out_json");
    *out_json = copy_string(to_json(theorem31_bound(chaos->sum(), constant_multiplier)).dump());
  });
}

cclt_status cclt_experiment_run(const char* kind, const char* config_json, const char* base_dir,
                                cclt_result** out) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out, "out");
    std::optional<ExperimentKind> requested;
    if (kind != nullptr) requested = parse_experiment_kind(kind);
    const auto document = nlohmann::json::parse(config_json);
    const ExperimentConfig config =
        ExperimentConfig::from_json(document, requested, base_dir ? base_dir : ".");
    auto result = std::make_unique<cclt_result>();
    result->files = render_outputs(run_experiment(config));
    result->output_dir = config.output_dir;
    *out = result.release();
  });
}

size_t cclt_result_file_count(const cclt_result* result) { return result ? result->files.size() : 0; }

const char* cclt_result_file_name(const cclt_result* result, size_t index) {
  if (!result || index >= result->files.size()) return nullptr;
  return result->files[index].name.c_str();
}

const char* cclt_result_file_text(const cclt_result* result, size_t index) {
  if (!result || index >= result->files.size()) return nullptr;
  return result->files[index].contents.c_str();
}

const char* cclt_result_output_dir(const cclt_result* result) {
  return result ? result->output_dir.c_str() : nullptr;
}

void cclt_result_free(cclt_result* result) { delete result; }

cclt_status cclt_fgn_covariance(double hurst, int64_t lag, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fgn_covariance(hurst, lag);
  });
}

cclt_status cclt_fgn_rate(double hurst, int q, double* exponent, double* log_power) {
  return guarded([&] {
    require(exponent, "exponent");
    require(log_power, "log_power");
    const RatePrediction rate = fgn_rate(hurst, q);
    *exponent = rate.exponent;
    *log_power = rate.log_power;
  });
}

}  // extern "C"
