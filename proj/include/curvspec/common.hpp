#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace curvspec {

inline constexpr const char* kVersion = "0.1.0";

/* Error taxonomy. Everything numerical that can refuse to produce a value
 * throws one of these; NoSolution is an expected outcome for parameters
 * outside the spectral interval, the rest indicate bad input or a genuine
 * numerical failure. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DomainViolation : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class MultipleRoots : public Error {
public:
    using Error::Error;
};

class GradientBlowup : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class DegenerateZero : public Error {
public:
    using Error::Error;
};

class NotASolution : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

/* Shared tolerance knobs. Quadrature runs one to two orders tighter than
 * the root solves layered on top of it. */
struct Tolerances {
    double quad_abs = 1e-12;
    double quad_rel = 1e-12;
    double root = 1e-10;
    double step = 1e-11;
};

/// Worker count: CURVSPEC_THREADS if set (>0), else hardware concurrency.
inline unsigned thread_count()
{
    if (const char* env = std::getenv("CURVSPEC_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/* Runs body(i) for i in [0, n). Each index must be independent; writes go to
 * distinct slots so results do not depend on the worker count. The first
 * exception thrown by any worker is rethrown on the calling thread. */
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = thread_count())
{
    if (n == 0)
        return;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace curvspec
