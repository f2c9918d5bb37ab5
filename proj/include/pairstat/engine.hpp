#pragma once

#include "pairstat/matrix.hpp"
#include "pairstat/request.hpp"

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pairstat {

// Static assignment of work units to workers: worker w owns units
// w, w + threads, w + 2 * threads, ... Cyclic order balances the shrinking
// rows of the pair triangle.
struct WorkAssignment {
    std::vector<std::vector<std::size_t>> per_worker;
};

WorkAssignment partition(std::size_t units, std::size_t threads);

// Runs fn(worker, unit) for every assigned unit, one thread per non-idle
// worker, and returns after all of them finish. The first exception (by
// worker index) is rethrown.
template <class Fn>
void run_assignment(const WorkAssignment& work, Fn&& fn)
{
    const std::size_t workers = work.per_worker.size();
    std::vector<std::exception_ptr> errors(workers);
    const auto body = [&](std::size_t w) {
        try {
            for (std::size_t unit : work.per_worker[w]) {
                fn(w, unit);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) {
            if (!work.per_worker[w].empty()) {
                pool.emplace_back(body, w);
            }
        }
        if (workers > 0) {
            body(0);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

// Homogeneous tests (pearson, spearman, chi2).
ResultSet run(const TestRequest& request, const DataMatrix& matrix);

// Mixed tests: `groups` holds the dichotomous/categorical features, `values`
// the continuous ones. Results are groups.features() x values.features().
ResultSet run(const TestRequest& request, const DataMatrix& groups, const DataMatrix& values);

// Validates the request against the test's output names.
void validate_outputs(const TestRequest& request);

}  // namespace pairstat
