#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nmds/error.hpp"

namespace nmds {

/// Worker count; 0 means "all hardware threads".
struct Parallelism {
    unsigned workers = 0;

    unsigned resolved() const noexcept {
        if (workers != 0) return workers;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
};

/// Runs fn(chunk) for chunk in [0, chunks) on a pool of workers and returns the
/// results indexed by chunk, so merging in index order is deterministic no
/// matter how chunks were scheduled.
template <class Result, class Fn>
std::vector<Result> parallel_chunks(std::size_t chunks, Parallelism par, Fn&& fn) {
    std::vector<Result> results(chunks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) results[c] = fn(c);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) return;
                try {
                    results[c] = fn(c);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(chunks);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

/// Estimated element-operation cap. Each guarded operation estimates its own
/// cost up front and refuses to start above the limit; accepted costs
/// accumulate in spent() for reporting.
class Budget {
public:
    static constexpr std::uint64_t kDefaultLimit = 5'000'000'000ULL;

    explicit Budget(std::uint64_t limit = kDefaultLimit) : limit_(limit) {}

    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t spent() const noexcept { return spent_; }
    bool allows(std::uint64_t cost) const noexcept { return cost <= limit_; }

    void charge(std::uint64_t cost, const std::string& what) {
        if (cost > limit_)
            fail(ErrorKind::BudgetExceeded, what + ": estimated cost " + std::to_string(cost) +
                                                " element operations exceeds the limit " + std::to_string(limit_));
        spent_ = spent_ > UINT64_MAX - cost ? UINT64_MAX : spent_ + cost;
    }

private:
    std::uint64_t limit_;
    std::uint64_t spent_ = 0;
};

}  // namespace nmds
