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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace textnet {

/*
 * Deterministic random source. The engine is std::mt19937_64, whose output
 * sequence is fixed by the standard, but none of the std distributions are:
 * they may differ between standard library implementations. Every
 * distribution used here is therefore derived from raw engine words by hand,
 * so a seed produces the same stream on every platform.
 */
class Rng {
public:
	explicit Rng(std::uint64_t seed) : m_engine(seed) {}

	std::uint64_t next_word() {
		return m_engine();
	}

	// Uniform double in [0, 1), 53 significant bits.
	double uniform() {
		return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
	}

	// Uniform double in [lo, hi).
	double uniform(double lo, double hi) {
		return lo + (hi - lo) * uniform();
	}

	// Uniform index in [0, bound). Rejection sampling keeps it unbiased.
	std::size_t index(std::size_t bound) {
		const std::uint64_t b = bound;
		const std::uint64_t threshold = (0 - b) % b;
		for (;;) {
			std::uint64_t word = m_engine();
			if (word >= threshold)
				return static_cast<std::size_t>(word % b);
		}
	}

	bool coin() {
		return (m_engine() >> 63) != 0;
	}

	// Standard normal via Box-Muller; the second value of each pair is cached.
	double normal() {
		if (m_has_cached) {
			m_has_cached = false;
			return m_cached;
		}
		double u1 = uniform();
		while (u1 <= 0.0)
			u1 = uniform();
		const double u2 = uniform();
		const double radius = std::sqrt(-2.0 * std::log(u1));
		const double angle = 2.0 * 3.14159265358979323846 * u2;
		m_cached = radius * std::sin(angle);
		m_has_cached = true;
		return radius * std::cos(angle);
	}

	// In-place Fisher-Yates shuffle.
	template <typename T>
	void shuffle(std::vector<T> &items) {
		for (std::size_t i = items.size(); i > 1; --i) {
			const std::size_t j = index(i);
			std::swap(items[i - 1], items[j]);
		}
	}

private:
	std::mt19937_64 m_engine;
	double m_cached = 0.0;
	bool m_has_cached = false;
};

} // namespace textnet
