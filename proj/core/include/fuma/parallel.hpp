#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fuma {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Items are claimed from a
/// shared counter, so callers must write results into per-index slots to keep
/// output independent of scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn &&fn) {
	const auto workers = static_cast<std::size_t>(std::max(1, jobs));
	if (workers == 1 || n <= 1) {
		for (std::size_t i = 0; i < n; ++i)
			fn(i);
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr error;
	std::mutex error_mutex;
	auto work = [&] {
		for (;;) {
			const std::size_t i = next.fetch_add(1);
			if (i >= n)
				return;
			try {
				fn(i);
			} catch (...) {
				std::lock_guard lock(error_mutex);
				if (!error)
					error = std::current_exception();
			}
		}
	};
	std::vector<std::jthread> pool;
	pool.reserve(std::min(workers, n));
	for (std::size_t t = 0; t < std::min(workers, n); ++t)
		pool.emplace_back(work);
	pool.clear();
	if (error)
		std::rethrow_exception(error);
}

} // namespace fuma
