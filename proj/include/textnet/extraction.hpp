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
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "textnet/error.hpp"
#include "textnet/io_util.hpp"
#include "textnet/parallel.hpp"
#include "textnet/rng.hpp"
#include "textnet/simgraph.hpp"

namespace textnet {

struct TabuParams {
	std::size_t tenure = 0;      // 0: max(5, ceil(n / 20))
	std::size_t stall_limit = 0; // 0: 3n consecutive non-improving moves
	std::size_t max_moves = 0;   // 0: 50n applied moves
};

inline TabuParams resolve_tabu(const TabuParams &params, std::size_t n) {
	TabuParams r = params;
	if (r.tenure == 0)
		r.tenure = std::max<std::size_t>(5, (n + 19) / 20);
	if (r.stall_limit == 0)
		r.stall_limit = 3 * n;
	if (r.max_moves == 0)
		r.max_moves = 50 * n;
	return r;
}

/*
 * Separation quality of a candidate community S against its complement:
 *
 *   w(S) = |S| |S^c| ( O(S) / |S|^2  -  B(S) / (|S| |S^c|) )
 *
 * where O sums all internal entries (ordered pairs) and B sums entries
 * crossing the boundary. Undefined for the empty set and the full node set.
 * This from-scratch form is the reference; the search uses an equivalent
 * incrementally maintained expression.
 */
inline double objective_value(const SimilarityGraph &g, const std::vector<std::size_t> &members) {
	const std::size_t n = g.size;
	std::vector<char> in(n, 0);
	std::size_t s = 0;
	for (std::size_t v : members) {
		if (v >= n)
			throw Error("node index out of range: " + std::to_string(v));
		if (in[v])
			throw Error("duplicate node in community: " + std::to_string(v));
		in[v] = 1;
		++s;
	}
	if (s == 0 || s == n)
		throw Error("objective undefined on trivial split");

	double internal = 0.0, boundary = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		if (!in[i])
			continue;
		for (std::size_t j = 0; j < n; ++j) {
			const double a = g.at(i, j);
			if (in[j])
				internal += a;
			else
				boundary += a;
		}
	}
	const double size_s = static_cast<double>(s);
	const double size_c = static_cast<double>(n - s);
	return size_s * size_c * (internal / (size_s * size_s) - boundary / (size_s * size_c));
}

// Mean internal weight over all |S|^2 ordered pairs (zero diagonal included).
inline double density_of_indices(const SimilarityGraph &g, const std::vector<std::size_t> &members) {
	if (members.empty())
		throw Error("density undefined for empty set");
	double sum = 0.0;
	for (std::size_t i : members)
		for (std::size_t j : members)
			sum += g.at(i, j);
	const double s = static_cast<double>(members.size());
	return sum / (s * s);
}

/*
 * Maintains w(S) in the algebraically equivalent form N O / |S| - T, with
 * T the sum of full row totals over S. One flip costs O(n): the candidate
 * scan is O(1) per node via the cached row sums into S.
 */
class IncrementalObjective {
public:
	IncrementalObjective(const SimilarityGraph &g, std::vector<char> membership)
		: m_g(&g), m_member(std::move(membership)), m_rowsum_s(g.size, 0.0), m_row_total(g.size, 0.0) {
		rebuild();
	}

	std::size_t community_size() const {
		return m_s;
	}

	const std::vector<char> &membership() const {
		return m_member;
	}

	double value() const {
		return evaluate(m_o, m_t, m_s);
	}

	double value_after_flip(std::size_t v) const {
		const bool leaving = m_member[v];
		const double o = m_o + (leaving ? -2.0 : 2.0) * m_rowsum_s[v];
		const double t = m_t + (leaving ? -1.0 : 1.0) * m_row_total[v];
		const std::size_t s = leaving ? m_s - 1 : m_s + 1;
		return evaluate(o, t, s);
	}

	void flip(std::size_t v) {
		const bool leaving = m_member[v];
		m_o += (leaving ? -2.0 : 2.0) * m_rowsum_s[v];
		m_t += (leaving ? -1.0 : 1.0) * m_row_total[v];
		m_s += leaving ? -1 : 1;
		m_member[v] = !leaving;
		const double sign = leaving ? -1.0 : 1.0;
		const std::size_t n = m_g->size;
		for (std::size_t i = 0; i < n; ++i)
			m_rowsum_s[i] += sign * m_g->at(i, v);
	}

	// Recomputes all cached sums exactly; called periodically to stop drift.
	void rebuild() {
		const std::size_t n = m_g->size;
		m_s = 0;
		m_o = 0.0;
		m_t = 0.0;
		for (std::size_t i = 0; i < n; ++i) {
			double rowsum = 0.0, total = 0.0;
			for (std::size_t j = 0; j < n; ++j) {
				const double a = m_g->at(i, j);
				total += a;
				if (m_member[j])
					rowsum += a;
			}
			m_rowsum_s[i] = rowsum;
			m_row_total[i] = total;
			if (m_member[i]) {
				++m_s;
				m_o += rowsum;
				m_t += total;
			}
		}
	}

private:
	double evaluate(double o, double t, std::size_t s) const {
		return static_cast<double>(m_g->size) * o / static_cast<double>(s) - t;
	}

	const SimilarityGraph *m_g;
	std::vector<char> m_member;
	std::vector<double> m_rowsum_s;
	std::vector<double> m_row_total;
	double m_o = 0.0;
	double m_t = 0.0;
	std::size_t m_s = 0;
};

namespace extraction_detail {

struct RunResult {
	std::vector<char> membership;
	double value = -std::numeric_limits<double>::infinity();
};

inline RunResult tabu_run(const SimilarityGraph &g, const TabuParams &resolved, Rng rng) {
	const std::size_t n = g.size;

	std::vector<char> membership(n, 0);
	for (;;) {
		std::size_t s = 0;
		for (std::size_t i = 0; i < n; ++i) {
			membership[i] = rng.coin() ? 1 : 0;
			s += membership[i];
		}
		if (s != 0 && s != n)
			break;
	}

	IncrementalObjective inc(g, membership);
	RunResult best{inc.membership(), inc.value()};

	std::vector<std::size_t> tabu_until(n, 0);
	std::size_t moves = 0;
	std::size_t stall = 0;

	while (moves < resolved.max_moves) {
		double best_candidate = -std::numeric_limits<double>::infinity();
		std::size_t chosen = n;
		const std::size_t s = inc.community_size();
		for (std::size_t v = 0; v < n; ++v) {
			const std::size_t s_after = inc.membership()[v] ? s - 1 : s + 1;
			if (s_after == 0 || s_after == n)
				continue;
			const double val = inc.value_after_flip(v);
			// Tabu unless it beats the incumbent (aspiration).
			if (moves < tabu_until[v] && !(val > best.value))
				continue;
			if (val > best_candidate) {
				best_candidate = val;
				chosen = v;
			}
		}
		if (chosen == n)
			break;

		inc.flip(chosen);
		++moves;
		tabu_until[chosen] = moves + resolved.tenure;
		if (moves % 2048 == 0)
			inc.rebuild();

		const double current = inc.value();
		if (current > best.value) {
			best.value = current;
			best.membership = inc.membership();
			stall = 0;
		} else if (++stall >= resolved.stall_limit) {
			break;
		}
	}
	return best;
}

} // namespace extraction_detail

/*
 * Best community found over independent tabu runs; restart r draws its
 * initial labels from seed + r. Ties keep the earliest restart. The returned
 * objective is recomputed from scratch on the final set.
 */
inline std::pair<std::vector<std::size_t>, double> tabu_extract(const SimilarityGraph &g, std::size_t restarts,
								std::uint64_t seed, const TabuParams &params = {},
								unsigned threads = 1) {
	if (g.size < 2)
		throw Error("graph too small for extraction");
	if (restarts < 1)
		throw ConfigError("restarts must be at least 1");
	const TabuParams resolved = resolve_tabu(params, g.size);

	std::vector<extraction_detail::RunResult> runs(restarts);
	parallel_for(restarts, threads, [&](std::size_t begin, std::size_t end) {
		for (std::size_t r = begin; r < end; ++r)
			runs[r] = extraction_detail::tabu_run(g, resolved, Rng(seed + r));
	});

	std::size_t winner = 0;
	for (std::size_t r = 1; r < restarts; ++r) {
		if (runs[r].value > runs[winner].value)
			winner = r;
	}

	std::vector<std::size_t> members;
	for (std::size_t v = 0; v < g.size; ++v) {
		if (runs[winner].membership[v])
			members.push_back(v);
	}
	return {members, objective_value(g, members)};
}

struct Community {
	std::vector<std::string> members; // ids, sorted
	double objective = 0.0;
	std::size_t iteration = 0; // 1-based index within its partition
	std::size_t partition = 0; // 1-based; 0 marks a community fused across partitions
	double density = 0.0;
};

struct ExtractionConfig {
	double tau = 0.0;
	std::uint64_t seed = 0;
	std::size_t restarts = 0;
	std::size_t min_residual = 0;
	TabuParams tabu; // zeros mean size-derived defaults
};

struct ExtractionResult {
	std::vector<Community> communities;
	std::vector<std::string> residual;
	ExtractionConfig config;
};

/*
 * Repeatedly extracts the best community and removes it, until at most
 * min_residual nodes survive. The same seed is passed to every round; rounds
 * differ because the graph shrinks.
 */
inline ExtractionResult extract_all(const SimilarityGraph &g, std::size_t min_residual, std::size_t restarts,
				    std::uint64_t seed, const TabuParams &params = {}, unsigned threads = 1,
				    std::size_t partition = 1) {
	if (g.size < 2)
		throw Error("graph too small for extraction");

	ExtractionResult result;
	result.config = {g.threshold, seed, restarts, min_residual, params};

	std::vector<std::size_t> alive(g.size);
	for (std::size_t i = 0; i < g.size; ++i)
		alive[i] = i;

	std::size_t iteration = 1;
	while (alive.size() > min_residual && alive.size() >= 2) {
		const SimilarityGraph sub = subgraph(g, alive);
		auto [local, value] = tabu_extract(sub, restarts, seed, params, threads);

		std::vector<std::size_t> original;
		original.reserve(local.size());
		for (std::size_t v : local)
			original.push_back(alive[v]);

		Community c;
		c.objective = value;
		c.iteration = iteration++;
		c.partition = partition;
		c.density = density_of_indices(g, original);
		for (std::size_t v : original)
			c.members.push_back(g.node_ids[v]);
		std::sort(c.members.begin(), c.members.end());
		result.communities.push_back(std::move(c));

		std::vector<char> remove(g.size, 0);
		for (std::size_t v : original)
			remove[v] = 1;
		std::vector<std::size_t> next;
		next.reserve(alive.size() - original.size());
		for (std::size_t v : alive) {
			if (!remove[v])
				next.push_back(v);
		}
		alive = std::move(next);
	}

	for (std::size_t v : alive)
		result.residual.push_back(g.node_ids[v]);
	std::sort(result.residual.begin(), result.residual.end());
	return result;
}

inline nlohmann::json extraction_to_json(const ExtractionResult &result) {
	nlohmann::json doc;
	doc["schema"] = "1.0.0";
	doc["communities"] = nlohmann::json::array();
	for (const Community &c : result.communities) {
		nlohmann::json jc;
		jc["community_index"] = c.iteration;
		jc["partition"] = c.partition;
		jc["objective"] = c.objective;
		jc["density"] = c.density;
		jc["member_ids"] = c.members;
		doc["communities"].push_back(std::move(jc));
	}
	doc["residual"] = result.residual;
	doc["config"] = {
		{"tau", result.config.tau},
		{"seed", result.config.seed},
		{"restarts", result.config.restarts},
		{"min_residual", result.config.min_residual},
		{"tenure", result.config.tabu.tenure},
		{"stall_limit", result.config.tabu.stall_limit},
		{"max_moves", result.config.tabu.max_moves},
	};
	return doc;
}

inline ExtractionResult extraction_from_json(const nlohmann::json &doc, const std::string &context) {
	if (!doc.is_object() || !doc.contains("communities") || !doc.contains("residual") || !doc.contains("config"))
		throw ConfigError(context + ": extraction result needs communities, residual and config");
	ExtractionResult result;
	for (const auto &jc : doc["communities"]) {
		Community c;
		c.iteration = jc.at("community_index").get<std::size_t>();
		c.partition = jc.at("partition").get<std::size_t>();
		c.objective = jc.at("objective").get<double>();
		c.density = jc.at("density").get<double>();
		c.members = jc.at("member_ids").get<std::vector<std::string>>();
		result.communities.push_back(std::move(c));
	}
	result.residual = doc["residual"].get<std::vector<std::string>>();
	const auto &cfg = doc["config"];
	result.config.tau = cfg.at("tau").get<double>();
	result.config.seed = cfg.at("seed").get<std::uint64_t>();
	result.config.restarts = cfg.at("restarts").get<std::size_t>();
	result.config.min_residual = cfg.at("min_residual").get<std::size_t>();
	result.config.tabu.tenure = cfg.at("tenure").get<std::size_t>();
	result.config.tabu.stall_limit = cfg.at("stall_limit").get<std::size_t>();
	result.config.tabu.max_moves = cfg.at("max_moves").get<std::size_t>();
	return result;
}

inline void write_extraction(const ExtractionResult &result, const std::string &path) {
	write_text_file(path, extraction_to_json(result).dump(2) + "\n");
}

inline ExtractionResult read_extraction(const std::string &path) {
	nlohmann::json doc;
	try {
		doc = nlohmann::json::parse(read_text_file(path));
	} catch (const nlohmann::json::parse_error &e) {
		throw ConfigError(path + ": malformed extraction result: " + std::string(e.what()));
	}
	return extraction_from_json(doc, path);
}

} // namespace textnet
