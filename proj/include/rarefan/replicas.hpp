#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace rarefan {

enum class Execution { Serial, Parallel };

struct ReplicaOptions {
    Execution mode = Execution::Parallel;
    // 0 means the OpenMP default
    int threads = 0;
};

// Reference runner: replicas one after another, results in replica order.
template <class R, class F>
std::vector<R> run_replicas_serial(std::size_t n, F&& body)
{
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
        out.push_back(body(r));
    return out;
}

// Replicas spread over threads. Each replica is a pure function of its index,
// so the result vector matches the serial runner exactly.
template <class R, class F>
std::vector<R> run_replicas_parallel(std::size_t n, F&& body, int threads = 0)
{
    std::vector<R> out(n);
    std::exception_ptr error;
    std::size_t error_index = n;
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (long long r = 0; r < count; ++r) {
        try {
            out[static_cast<std::size_t>(r)] = body(static_cast<std::size_t>(r));
        } catch (...) {
#pragma omp critical(rarefan_replica_error)
            {
                if (static_cast<std::size_t>(r) < error_index) {
                    error_index = static_cast<std::size_t>(r);
                    error = std::current_exception();
                }
            }
        }
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

template <class R, class F>
std::vector<R> run_replicas(std::size_t n, F&& body, const ReplicaOptions& options)
{
    if (options.mode == Execution::Serial)
        return run_replicas_serial<R>(n, body);
    return run_replicas_parallel<R>(n, body, options.threads);
}

}
