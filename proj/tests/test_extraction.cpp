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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "textnet/extraction.hpp"
#include "textnet/simgraph.hpp"
#include "test_util.hpp"

using namespace textnet;
using Catch::Matchers::WithinAbs;

namespace {

SimilarityGraph four_node_graph() {
	SimilarityGraph g;
	g.size = 4;
	g.adjacency.assign(16, 0.0);
	g.node_ids = {"n1", "n2", "n3", "n4"};
	g.set(0, 1, 0.9);
	g.set(2, 3, 0.8);
	g.set(0, 2, 0.1);
	g.edge_count = g.count_edges();
	return g;
}

SimilarityGraph complete_graph(std::size_t n, double w) {
	SimilarityGraph g;
	g.size = n;
	g.adjacency.assign(n * n, 0.0);
	for (std::size_t i = 0; i < n; ++i) {
		g.node_ids.push_back("n" + std::to_string(i));
		for (std::size_t j = i + 1; j < n; ++j)
			g.set(i, j, w);
	}
	g.edge_count = g.count_edges();
	return g;
}

SimilarityGraph random_graph(std::size_t n, std::uint64_t seed) {
	const Matrix emb = testutil::random_matrix(n, 5, seed);
	std::vector<std::string> ids;
	for (std::size_t i = 0; i < n; ++i)
		ids.push_back("n" + std::to_string(i));
	return build_graph(emb, ids, 0.0);
}

// exhaustive best split over all nontrivial subsets; n must stay small
double enumerate_best(const SimilarityGraph &g) {
	double best = -1e300;
	for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << g.size); ++mask) {
		std::vector<std::size_t> members;
		for (std::size_t v = 0; v < g.size; ++v) {
			if (mask & (std::size_t(1) << v))
				members.push_back(v);
		}
		best = std::max(best, objective_value(g, members));
	}
	return best;
}

} // namespace

TEST_CASE("objective matches the worked four node example", "[extraction]") {
	const auto g = four_node_graph();
	CHECK_THAT(objective_value(g, {0, 1}), WithinAbs(1.7, 1e-12));
	CHECK_THAT(objective_value(g, {0, 1, 2}), WithinAbs(-0.4 / 3.0, 1e-12));
	CHECK_THAT(objective_value(g, {2, 3}), WithinAbs(1.5, 1e-12));
}

TEST_CASE("objective on a uniform complete graph is minus w times the rest", "[extraction]") {
	const double w = 0.5;
	const auto g = complete_graph(6, w);
	for (std::size_t s = 1; s <= 5; ++s) {
		std::vector<std::size_t> members;
		for (std::size_t v = 0; v < s; ++v)
			members.push_back(v);
		CHECK_THAT(objective_value(g, members), WithinAbs(-w * static_cast<double>(6 - s), 1e-12));
	}
}

TEST_CASE("objective rejects trivial and malformed splits", "[extraction]") {
	const auto g = four_node_graph();
	CHECK_THROWS_WITH(objective_value(g, {}), Catch::Matchers::ContainsSubstring("trivial split"));
	CHECK_THROWS_WITH(objective_value(g, {0, 1, 2, 3}), Catch::Matchers::ContainsSubstring("trivial split"));
	CHECK_THROWS_AS(objective_value(g, {7}), Error);
	CHECK_THROWS_AS(objective_value(g, {1, 1}), Error);
}

TEST_CASE("density is the weight sum over size squared", "[extraction]") {
	const auto g = four_node_graph();
	// members {0, 1}: sum over the 2x2 block is 1.8
	CHECK_THAT(density_of_indices(g, {0, 1}), WithinAbs(0.45, 1e-12));
	CHECK_THAT(density_of_indices(g, {2, 3}), WithinAbs(0.4, 1e-12));
	CHECK_THROWS_AS(density_of_indices(g, {}), Error);
}

TEST_CASE("incremental objective tracks the exact recomputation", "[extraction]") {
	const auto g = random_graph(14, 900);
	Rng rng(901);

	std::vector<char> membership(g.size, 0);
	for (std::size_t i = 0; i < g.size / 2; ++i)
		membership[i] = 1;

	IncrementalObjective inc(g, membership);
	std::vector<char> mirror = membership;

	auto exact_value = [&]() {
		std::vector<std::size_t> members;
		for (std::size_t v = 0; v < g.size; ++v) {
			if (mirror[v])
				members.push_back(v);
		}
		return objective_value(g, members);
	};

	CHECK_THAT(inc.value(), WithinAbs(exact_value(), 1e-9));

	std::size_t applied = 0;
	for (int step = 0; step < 300 && applied < 200; ++step) {
		const std::size_t v = rng.index(g.size);
		const std::size_t s_after = mirror[v] ? inc.community_size() - 1 : inc.community_size() + 1;
		if (s_after == 0 || s_after == g.size)
			continue;

		const double predicted = inc.value_after_flip(v);
		inc.flip(v);
		mirror[v] = !mirror[v];
		++applied;

		const double exact = exact_value();
		CHECK_THAT(predicted, WithinAbs(exact, 1e-9));
		CHECK_THAT(inc.value(), WithinAbs(exact, 1e-9));

		if (applied % 50 == 0) {
			inc.rebuild();
			CHECK_THAT(inc.value(), WithinAbs(exact, 1e-9));
		}
	}
	REQUIRE(applied == 200);
}

TEST_CASE("tabu search finds the unique best split of the four node graph", "[extraction]") {
	const auto g = four_node_graph();
	const auto [members, value] = tabu_extract(g, 4, 1);
	CHECK(members == std::vector<std::size_t>{0, 1});
	CHECK_THAT(value, WithinAbs(1.7, 1e-12));
}

TEST_CASE("tabu search attains the enumerated optimum on small graphs", "[extraction]") {
	for (std::uint64_t seed : {201u, 202u, 203u, 204u}) {
		const auto g = random_graph(9, seed);
		const double best = enumerate_best(g);
		const auto [members, value] = tabu_extract(g, 20, seed + 10);
		INFO("seed " << seed);
		CHECK(value <= best + 1e-9);
		CHECK_THAT(value, WithinAbs(best, 1e-9));
	}
}

TEST_CASE("extraction is deterministic and thread count neutral", "[extraction]") {
	const auto g = random_graph(20, 77);
	const auto a = tabu_extract(g, 6, 5, {}, 1);
	const auto b = tabu_extract(g, 6, 5, {}, 1);
	const auto c = tabu_extract(g, 6, 5, {}, 4);
	CHECK(a.first == b.first);
	CHECK(a.second == b.second);
	CHECK(a.first == c.first);
	CHECK(a.second == c.second);

	CHECK_THROWS_AS(tabu_extract(g, 0, 5), ConfigError);
	CHECK_THROWS_AS(tabu_extract(subgraph(g, {0}), 3, 5), Error);
}

TEST_CASE("repeated extraction partitions the node set", "[extraction]") {
	const auto g = random_graph(24, 321);
	const ExtractionResult result = extract_all(g, 5, 8, 99, {}, 1, 3);

	CHECK(result.config.seed == 99);
	CHECK(result.config.restarts == 8);
	CHECK(result.config.min_residual == 5);

	std::vector<std::string> seen = result.residual;
	CHECK(result.residual.size() <= 5);
	std::size_t iteration = 1;
	for (const Community &c : result.communities) {
		CHECK(c.iteration == iteration++);
		CHECK(c.partition == 3);
		CHECK(std::is_sorted(c.members.begin(), c.members.end()));
		CHECK(!c.members.empty());
		seen.insert(seen.end(), c.members.begin(), c.members.end());
	}

	std::sort(seen.begin(), seen.end());
	std::vector<std::string> all = g.node_ids;
	std::sort(all.begin(), all.end());
	CHECK(seen == all);
}

TEST_CASE("density uses the full graph, objective the round it was found in", "[extraction]") {
	const auto g = random_graph(16, 55);
	const ExtractionResult result = extract_all(g, 4, 6, 7);

	std::unordered_map<std::string, std::size_t> index;
	for (std::size_t i = 0; i < g.size; ++i)
		index[g.node_ids[i]] = i;

	// Replay the rounds: each objective was maximized on the subgraph of
	// nodes still alive when its community was extracted.
	std::vector<std::size_t> alive(g.size);
	std::iota(alive.begin(), alive.end(), std::size_t(0));
	for (const Community &c : result.communities) {
		std::vector<std::size_t> members;
		for (const auto &id : c.members)
			members.push_back(index.at(id));
		CHECK_THAT(c.density, WithinAbs(density_of_indices(g, members), 1e-12));

		const SimilarityGraph round = subgraph(g, alive);
		std::unordered_map<std::string, std::size_t> local;
		for (std::size_t i = 0; i < round.size; ++i)
			local[round.node_ids[i]] = i;
		std::vector<std::size_t> in_round;
		for (const auto &id : c.members)
			in_round.push_back(local.at(id));
		CHECK_THAT(c.objective, WithinAbs(objective_value(round, in_round), 1e-9));

		const std::set<std::string> removed(c.members.begin(), c.members.end());
		std::vector<std::size_t> next;
		for (std::size_t v : alive) {
			if (!removed.count(g.node_ids[v]))
				next.push_back(v);
		}
		alive = std::move(next);
	}
}

TEST_CASE("extraction results survive the json round-trip", "[extraction]") {
	testutil::TempDir dir("extract");
	const auto g = random_graph(12, 31);
	const ExtractionResult result = extract_all(g, 3, 5, 11, {}, 1, 2);

	write_extraction(result, dir.file("r.json"));
	const ExtractionResult back = read_extraction(dir.file("r.json"));

	REQUIRE(back.communities.size() == result.communities.size());
	for (std::size_t i = 0; i < result.communities.size(); ++i) {
		CHECK(back.communities[i].members == result.communities[i].members);
		CHECK(back.communities[i].objective == result.communities[i].objective);
		CHECK(back.communities[i].iteration == result.communities[i].iteration);
		CHECK(back.communities[i].partition == result.communities[i].partition);
		CHECK(back.communities[i].density == result.communities[i].density);
	}
	CHECK(back.residual == result.residual);
	CHECK(back.config.seed == result.config.seed);
	CHECK(back.config.tau == result.config.tau);
	CHECK(back.config.restarts == result.config.restarts);
	CHECK(back.config.min_residual == result.config.min_residual);
}
