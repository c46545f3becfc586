#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace arealaw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested quantity is not defined for the given (E_F, m, d) combination.
struct RegimeError : Error {
    using Error::Error;
};

/// A quadrature did not reach the requested tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

/// Grid spacing violates the momentum-support sampling bound.
struct ResolutionError : Error {
    using Error::Error;
};

struct GeometryError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct EigensolverError : Error {
    using Error::Error;
};

/// Runs body(i) for i in [0, n). With threads <= 1 this is a plain loop.
/// The first exception thrown by any worker is rethrown in the caller.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    pool.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace arealaw
