/*
 * Copyright 2026 The textnet authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace textnet {

// 0 means "use the hardware concurrency"; anything else is taken literally.
inline unsigned resolve_threads(unsigned requested) {
	if (requested != 0)
		return requested;
	const unsigned hw = std::thread::hardware_concurrency();
	return hw == 0 ? 1 : hw;
}

/*
 * Runs fn(begin, end) over a static split of [0, count). Workers write to
 * disjoint output slots chosen by index, so results are identical for every
 * thread count. The first exception thrown by any worker is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn) {
	threads = resolve_threads(threads);
	if (count == 0)
		return;
	if (threads <= 1 || count == 1) {
		fn(std::size_t(0), count);
		return;
	}

	const std::size_t workers = std::min<std::size_t>(threads, count);
	const std::size_t chunk = (count + workers - 1) / workers;

	std::vector<std::thread> pool;
	std::vector<std::exception_ptr> errors(workers);
	pool.reserve(workers);
	for (std::size_t w = 0; w < workers; ++w) {
		const std::size_t begin = w * chunk;
		const std::size_t end = std::min(count, begin + chunk);
		if (begin >= end)
			break;
		pool.emplace_back([&fn, &errors, w, begin, end]() {
			try {
				fn(begin, end);
			} catch (...) {
				errors[w] = std::current_exception();
			}
		});
	}
	for (auto &t : pool)
		t.join();
	for (auto &err : errors) {
		if (err)
			std::rethrow_exception(err);
	}
}

} // namespace textnet
