#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <vector>

namespace nlp {

/// Worker cap: NLP_THREADS when set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t thread_limit();

/// Runs fn(0..count-1) with at most thread_limit() tasks in flight and
/// returns the results in index order. Exceptions propagate from the lowest
/// failing index.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, const std::function<Result(std::size_t)>& fn) {
    std::vector<std::future<Result>> pending(count);
    const std::size_t limit = thread_limit();
    std::vector<Result> out;
    out.reserve(count);
    std::size_t launched = 0;
    for (std::size_t k = 0; k < count; ++k) {
        while (launched < count && launched < k + limit) {
            pending[launched] = std::async(limit > 1 ? std::launch::async : std::launch::deferred, fn, launched);
            ++launched;
        }
        out.push_back(pending[k].get());
    }
    return out;
}

}  // namespace nlp
