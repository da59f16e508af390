#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace frontlab {

/// Worker count: FRONTLAB_THREADS if set, else the hardware concurrency.
inline int thread_count() {
    if (const char* s = std::getenv("FRONTLAB_THREADS")) {
        try {
            int n = std::stoi(s);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..n-1) on a small pool; results keep index order.
template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& fn) {
    std::vector<T> out(n);
    int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex m;
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(m);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace frontlab
