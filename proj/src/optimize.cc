#include "scrambled/optimize.h"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>

namespace scrambled {

namespace {

struct Callback {
    const Objective *f;
    std::vector<double> buffer;
};

double trampoline(const gsl_vector *v, void *params) {
    auto *cb = static_cast<Callback *>(params);
    for (size_t i = 0; i < v->size; ++i) {
        cb->buffer[i] = gsl_vector_get(v, i);
    }
    double y = (*cb->f)(cb->buffer);
    return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

struct VectorDeleter {
    void operator()(gsl_vector *v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

MinimizeResult nelder_mead(const Objective &f, std::span<const double> start,
                           const NelderMeadOptions &options) {
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;

    const size_t n = start.size();
    Callback cb{&f, std::vector<double>(n)};
    gsl_multimin_function fn{&trampoline, n, &cb};

    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
    for (size_t i = 0; i < n; ++i) {
        gsl_vector_set(x.get(), i, start[i]);
    }
    gsl_vector_set_all(step.get(), options.step);

    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
    gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get());

    MinimizeResult result;
    int status = GSL_CONTINUE;
    while (status == GSL_CONTINUE && result.iterations < options.max_iterations) {
        ++result.iterations;
        if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) {
            break;
        }
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), options.size_tol);
    }
    result.converged = status == GSL_SUCCESS;
    result.value = gsl_multimin_fminimizer_minimum(m.get());
    result.x.resize(n);
    const gsl_vector *best = gsl_multimin_fminimizer_x(m.get());
    for (size_t i = 0; i < n; ++i) {
        result.x[i] = gsl_vector_get(best, i);
    }
    return result;
}

std::vector<MinimizeResult> multi_start(const Objective &f, const std::vector<std::vector<double>> &starts,
                                        const NelderMeadOptions &options) {
    std::vector<MinimizeResult> out;
    out.reserve(starts.size());
    for (const auto &s : starts) {
        out.push_back(nelder_mead(f, s, options));
    }
    return out;
}

size_t best_index(const std::vector<MinimizeResult> &results) {
    size_t best = 0;
    for (size_t i = 1; i < results.size(); ++i) {
        if (results[i].value < results[best].value) best = i;
    }
    return best;
}

int agreeing_starts(const std::vector<MinimizeResult> &results, double tol) {
    if (results.empty()) return 0;
    double best = results[best_index(results)].value;
    int n = 0;
    for (const auto &r : results) {
        if (r.value <= best + tol) ++n;
    }
    return n;
}

}  // namespace scrambled
