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
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "textnet/error.hpp"
#include "textnet/extraction.hpp"
#include "textnet/io_util.hpp"
#include "textnet/rng.hpp"
#include "textnet/simgraph.hpp"

namespace textnet {

struct PartitionPlan {
	std::size_t chunk_size = 0;
	std::uint64_t seed = 0;
	std::vector<std::vector<std::string>> partitions;           // 1-based externally: partitions[p-1]
	std::unordered_map<std::string, std::size_t> assignment;    // id -> 1-based partition
};

/*
 * Shuffles ids and cuts them into consecutive chunks of chunk_size. A last
 * chunk smaller than half the chunk size folds into its predecessor, so chunk
 * sizes stay within [c/2, 3c/2] whenever more than one chunk exists.
 */
inline PartitionPlan random_partition(const std::vector<std::string> &ids, std::size_t chunk_size,
				      std::uint64_t seed) {
	if (chunk_size < 2)
		throw ConfigError("chunk size must be at least 2");

	PartitionPlan plan;
	plan.chunk_size = chunk_size;
	plan.seed = seed;

	std::vector<std::string> shuffled = ids;
	Rng rng(seed);
	rng.shuffle(shuffled);

	for (std::size_t begin = 0; begin < shuffled.size(); begin += chunk_size) {
		const std::size_t end = std::min(shuffled.size(), begin + chunk_size);
		plan.partitions.emplace_back(shuffled.begin() + begin, shuffled.begin() + end);
	}
	if (plan.partitions.size() >= 2 && plan.partitions.back().size() * 2 < chunk_size) {
		auto last = std::move(plan.partitions.back());
		plan.partitions.pop_back();
		auto &prev = plan.partitions.back();
		prev.insert(prev.end(), last.begin(), last.end());
	}

	for (std::size_t p = 0; p < plan.partitions.size(); ++p) {
		for (const auto &id : plan.partitions[p])
			plan.assignment[id] = p + 1;
	}
	return plan;
}

namespace merge_detail {

inline std::vector<std::size_t> indices_of(const SimilarityGraph &g,
					   const std::unordered_map<std::string, std::size_t> &index_of,
					   const std::vector<std::string> &members) {
	std::vector<std::size_t> out;
	out.reserve(members.size());
	for (const auto &id : members) {
		auto it = index_of.find(id);
		if (it == index_of.end())
			throw Error("community member not in graph: " + id);
		out.push_back(it->second);
	}
	(void)g;
	return out;
}

inline std::unordered_map<std::string, std::size_t> index_map(const SimilarityGraph &g) {
	std::unordered_map<std::string, std::size_t> index_of;
	index_of.reserve(g.size);
	for (std::size_t i = 0; i < g.size; ++i)
		index_of.emplace(g.node_ids[i], i);
	return index_of;
}

struct UnionFind {
	std::vector<std::size_t> parent;

	explicit UnionFind(std::size_t n) : parent(n) {
		std::iota(parent.begin(), parent.end(), std::size_t(0));
	}

	std::size_t find(std::size_t x) {
		while (parent[x] != x) {
			parent[x] = parent[parent[x]];
			x = parent[x];
		}
		return x;
	}

	void unite(std::size_t a, std::size_t b) {
		a = find(a);
		b = find(b);
		if (a != b)
			parent[std::max(a, b)] = std::min(a, b);
	}
};

} // namespace merge_detail

// Mean internal weight of a community, measured on the full graph.
inline double community_density(const SimilarityGraph &g, const Community &c) {
	const auto index_of = merge_detail::index_map(g);
	return density_of_indices(g, merge_detail::indices_of(g, index_of, c.members));
}

// Mean weight over all pairs with one endpoint in each community.
inline double cross_density(const SimilarityGraph &g, const Community &a, const Community &b) {
	const auto index_of = merge_detail::index_map(g);
	const auto ia = merge_detail::indices_of(g, index_of, a.members);
	const auto ib = merge_detail::indices_of(g, index_of, b.members);

	std::unordered_set<std::size_t> seen(ia.begin(), ia.end());
	for (std::size_t v : ib) {
		if (seen.count(v))
			throw Error("communities must be disjoint, both contain: " + g.node_ids[v]);
	}

	double sum = 0.0;
	for (std::size_t i : ia)
		for (std::size_t j : ib)
			sum += g.at(i, j);
	return sum / (static_cast<double>(ia.size()) * static_cast<double>(ib.size()));
}

struct MergeDecision {
	std::string community_a; // label "p<partition>a<index>"
	std::string community_b;
	double density_a = 0.0;
	double density_b = 0.0;
	double cross = 0.0;
	bool merged = false;
};

struct MergeOutcome {
	ExtractionResult result;
	std::vector<MergeDecision> decisions;
	double ratio = 0.0;
};

inline std::string community_label(const Community &c) {
	return "p" + std::to_string(c.partition) + "a" + std::to_string(c.iteration);
}

/*
 * Fuses communities found in different partitions when their cross density
 * strictly exceeds ratio times BOTH internal densities. Equality does not
 * merge. Fusion is transitive (union-find), and pairs from the same original
 * partition are never candidates. Fused communities get partition 0 and a
 * recomputed objective and density on the full graph; untouched communities
 * keep their extraction-time values.
 */
inline MergeOutcome merge_communities(const SimilarityGraph &g_full,
				      const std::vector<ExtractionResult> &per_partition, double ratio) {
	if (ratio <= 0.0 || ratio > 1.0)
		throw ConfigError("merge ratio must be in (0, 1]");

	MergeOutcome outcome;
	outcome.ratio = ratio;

	std::vector<Community> all;
	for (const auto &result : per_partition)
		for (const auto &c : result.communities)
			all.push_back(c);
	std::stable_sort(all.begin(), all.end(), [](const Community &a, const Community &b) {
		if (a.partition != b.partition)
			return a.partition < b.partition;
		return a.iteration < b.iteration;
	});

	const auto index_of = merge_detail::index_map(g_full);
	std::vector<double> internal(all.size());
	std::vector<std::vector<std::size_t>> indices(all.size());
	for (std::size_t i = 0; i < all.size(); ++i) {
		indices[i] = merge_detail::indices_of(g_full, index_of, all[i].members);
		internal[i] = density_of_indices(g_full, indices[i]);
	}

	merge_detail::UnionFind groups(all.size());
	for (std::size_t i = 0; i < all.size(); ++i) {
		for (std::size_t j = i + 1; j < all.size(); ++j) {
			if (all[i].partition == all[j].partition)
				continue;
			double sum = 0.0;
			for (std::size_t a : indices[i])
				for (std::size_t b : indices[j])
					sum += g_full.at(a, b);
			const double cross = sum / (static_cast<double>(indices[i].size()) *
						    static_cast<double>(indices[j].size()));

			MergeDecision d;
			d.community_a = community_label(all[i]);
			d.community_b = community_label(all[j]);
			d.density_a = internal[i];
			d.density_b = internal[j];
			d.cross = cross;
			d.merged = cross > ratio * internal[i] && cross > ratio * internal[j];
			if (d.merged)
				groups.unite(i, j);
			outcome.decisions.push_back(std::move(d));
		}
	}

	// Emit fused groups ordered by their first constituent.
	std::unordered_map<std::size_t, std::vector<std::size_t>> by_root;
	std::vector<std::size_t> roots;
	for (std::size_t i = 0; i < all.size(); ++i) {
		const std::size_t root = groups.find(i);
		auto [it, inserted] = by_root.try_emplace(root);
		if (inserted)
			roots.push_back(root);
		it->second.push_back(i);
	}
	std::sort(roots.begin(), roots.end());

	ExtractionResult &merged = outcome.result;
	std::size_t next_index = 1;
	for (std::size_t root : roots) {
		const auto &group = by_root[root];
		if (group.size() == 1) {
			Community c = all[group[0]];
			c.iteration = next_index++;
			merged.communities.push_back(std::move(c));
			continue;
		}
		Community fused;
		fused.partition = 0;
		fused.iteration = next_index++;
		std::vector<std::size_t> fused_indices;
		for (std::size_t i : group) {
			fused.members.insert(fused.members.end(), all[i].members.begin(), all[i].members.end());
			fused_indices.insert(fused_indices.end(), indices[i].begin(), indices[i].end());
		}
		std::sort(fused.members.begin(), fused.members.end());
		fused.density = density_of_indices(g_full, fused_indices);
		fused.objective = fused_indices.size() < g_full.size
			? objective_value(g_full, fused_indices)
			: 0.0; // objective is undefined when the fusion swallows every node
		merged.communities.push_back(std::move(fused));
	}

	for (const auto &result : per_partition)
		merged.residual.insert(merged.residual.end(), result.residual.begin(), result.residual.end());
	std::sort(merged.residual.begin(), merged.residual.end());

	if (!per_partition.empty())
		merged.config = per_partition.front().config;
	return outcome;
}

inline void write_merge_report(const std::vector<MergeDecision> &decisions, const std::string &path) {
	std::ostringstream out;
	out << "commA,commB,dA,dB,dCross,merged\n";
	for (const auto &d : decisions) {
		out << d.community_a << "," << d.community_b << "," << format_double(d.density_a) << ","
		    << format_double(d.density_b) << "," << format_double(d.cross) << ","
		    << (d.merged ? "true" : "false") << "\n";
	}
	write_text_file(path, out.str());
}

} // namespace textnet
