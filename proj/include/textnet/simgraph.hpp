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
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "textnet/error.hpp"
#include "textnet/io_util.hpp"
#include "textnet/linalg.hpp"
#include "textnet/parallel.hpp"

namespace textnet {

/*
 * Symmetric weighted graph over documents: entry (i, j) is the Pearson
 * correlation of embedding rows i and j, zeroed below the threshold tau
 * (tau = 0 keeps everything, including negative correlations). Diagonal is
 * zero by convention.
 */
struct SimilarityGraph {
	std::size_t size = 0;
	std::vector<double> adjacency; // dense size x size, row major
	std::vector<std::string> node_ids;
	double threshold = 0.0;
	std::size_t edge_count = 0; // nonzero unordered pairs

	double at(std::size_t i, std::size_t j) const {
		return adjacency[i * size + j];
	}

	void set(std::size_t i, std::size_t j, double v) {
		adjacency[i * size + j] = v;
		adjacency[j * size + i] = v;
	}

	std::size_t count_edges() const {
		std::size_t count = 0;
		for (std::size_t i = 0; i < size; ++i)
			for (std::size_t j = i + 1; j < size; ++j)
				if (at(i, j) != 0.0)
					++count;
		return count;
	}
};

/*
 * Pearson correlation of two equal-length vectors, clamped into [-1, 1] to
 * absorb roundoff. Needs at least two coordinates and nonzero variance on
 * both sides.
 */
inline double pearson(const double *u, const double *v, std::size_t k) {
	if (k < 2)
		throw ConfigError("pearson correlation needs at least 2 coordinates");
	double mu = 0.0, mv = 0.0;
	for (std::size_t i = 0; i < k; ++i) {
		mu += u[i];
		mv += v[i];
	}
	mu /= static_cast<double>(k);
	mv /= static_cast<double>(k);

	double suu = 0.0, svv = 0.0, suv = 0.0;
	for (std::size_t i = 0; i < k; ++i) {
		const double du = u[i] - mu;
		const double dv = v[i] - mv;
		suu += du * du;
		svv += dv * dv;
		suv += du * dv;
	}
	if (suu == 0.0 || svv == 0.0)
		throw Error("zero variance row in correlation");
	const double r = suv / (std::sqrt(suu) * std::sqrt(svv));
	return std::clamp(r, -1.0, 1.0);
}

inline double pearson(const std::vector<double> &u, const std::vector<double> &v) {
	if (u.size() != v.size())
		throw ConfigError("pearson correlation needs equal-length vectors");
	return pearson(u.data(), v.data(), u.size());
}

inline SimilarityGraph build_graph(const Matrix &embeddings, const std::vector<std::string> &ids, double tau,
				   unsigned threads = 1) {
	const std::size_t n = embeddings.rows();
	if (n < 2)
		throw ConfigError("similarity graph needs at least 2 documents");
	if (ids.size() != n)
		throw Error("node id count does not match embedding rows");
	if (tau < 0.0 || tau >= 1.0)
		throw ConfigError("threshold tau must be in [0, 1)");
	const std::size_t k = embeddings.cols();

	// Rows with no variance have undefined correlations; report them by id.
	std::vector<std::string> degenerate;
	for (std::size_t i = 0; i < n; ++i) {
		const double *row = embeddings.row_data(i);
		double mean = 0.0;
		for (std::size_t c = 0; c < k; ++c)
			mean += row[c];
		mean /= static_cast<double>(k == 0 ? 1 : k);
		double ss = 0.0;
		for (std::size_t c = 0; c < k; ++c)
			ss += (row[c] - mean) * (row[c] - mean);
		if (ss == 0.0)
			degenerate.push_back(ids[i]);
	}
	if (!degenerate.empty()) {
		std::string joined;
		for (const auto &id : degenerate)
			joined += (joined.empty() ? "" : ", ") + id;
		throw Error("zero variance embedding row for: " + joined);
	}

	SimilarityGraph g;
	g.size = n;
	g.adjacency.assign(n * n, 0.0);
	g.node_ids = ids;
	g.threshold = tau;

	parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
		for (std::size_t i = begin; i < end; ++i) {
			for (std::size_t j = i + 1; j < n; ++j) {
				double r = pearson(embeddings.row_data(i), embeddings.row_data(j), k);
				if (tau > 0.0 && r < tau)
					r = 0.0;
				g.adjacency[i * n + j] = r;
				g.adjacency[j * n + i] = r;
			}
		}
	});
	g.edge_count = g.count_edges();
	return g;
}

// Re-applies a threshold to an existing graph (used on synthetic matrices).
inline SimilarityGraph threshold_graph(const SimilarityGraph &g, double tau) {
	if (tau < 0.0 || tau >= 1.0)
		throw ConfigError("threshold tau must be in [0, 1)");
	SimilarityGraph out = g;
	out.threshold = tau;
	if (tau > 0.0) {
		for (std::size_t i = 0; i < out.size; ++i) {
			for (std::size_t j = 0; j < out.size; ++j) {
				if (i != j && out.adjacency[i * out.size + j] < tau)
					out.adjacency[i * out.size + j] = 0.0;
			}
		}
	}
	out.edge_count = out.count_edges();
	return out;
}

/*
 * Node-induced subgraph. Indices are deduplicated and sorted so the relative
 * order of the original graph is preserved.
 */
inline SimilarityGraph subgraph(const SimilarityGraph &g, std::vector<std::size_t> nodes) {
	std::sort(nodes.begin(), nodes.end());
	nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
	for (std::size_t v : nodes) {
		if (v >= g.size)
			throw Error("subgraph node index out of range: " + std::to_string(v));
	}
	SimilarityGraph out;
	out.size = nodes.size();
	out.adjacency.assign(out.size * out.size, 0.0);
	out.node_ids.reserve(out.size);
	out.threshold = g.threshold;
	for (std::size_t v : nodes)
		out.node_ids.push_back(g.node_ids[v]);
	for (std::size_t i = 0; i < out.size; ++i)
		for (std::size_t j = 0; j < out.size; ++j)
			out.adjacency[i * out.size + j] = g.at(nodes[i], nodes[j]);
	out.edge_count = out.count_edges();
	return out;
}

/*
 * Edge list CSV (upper triangle, nonzero entries, full precision) plus a JSON
 * sidecar with node ids and provenance. k and seed record how the embeddings
 * behind the graph were produced; pass 0 when not applicable.
 */
inline void write_graph(const SimilarityGraph &g, const std::string &edges_path, const std::string &meta_path,
			std::size_t k = 0, std::uint64_t seed = 0) {
	std::ostringstream out;
	out << "i,j,weight\n";
	for (std::size_t i = 0; i < g.size; ++i) {
		for (std::size_t j = i + 1; j < g.size; ++j) {
			const double w = g.at(i, j);
			if (w != 0.0)
				out << i << "," << j << "," << format_double(w) << "\n";
		}
	}
	write_text_file(edges_path, out.str());

	nlohmann::json meta;
	meta["schema"] = "1.0.0";
	meta["node_ids"] = g.node_ids;
	meta["tau"] = g.threshold;
	meta["k"] = k;
	meta["seed"] = seed;
	write_text_file(meta_path, meta.dump(2) + "\n");
}

inline SimilarityGraph read_graph(const std::string &edges_path, const std::string &meta_path) {
	nlohmann::json meta;
	try {
		meta = nlohmann::json::parse(read_text_file(meta_path));
	} catch (const nlohmann::json::parse_error &e) {
		throw ConfigError(meta_path + ": malformed graph metadata: " + std::string(e.what()));
	}
	if (!meta.contains("node_ids") || !meta["node_ids"].is_array() || !meta.contains("tau"))
		throw ConfigError(meta_path + ": graph metadata needs node_ids and tau");

	SimilarityGraph g;
	g.node_ids = meta["node_ids"].get<std::vector<std::string>>();
	g.size = g.node_ids.size();
	g.threshold = meta["tau"].get<double>();
	g.adjacency.assign(g.size * g.size, 0.0);

	const auto lines = split_lines(read_text_file(edges_path));
	if (lines.empty() || lines[0] != "i,j,weight")
		throw ConfigError(edges_path + ": expected header i,j,weight");
	for (std::size_t ln = 1; ln < lines.size(); ++ln) {
		if (trim(lines[ln]).empty())
			continue;
		const std::string where = edges_path + ":" + std::to_string(ln + 1);
		const auto fields = split_csv_line(lines[ln], where);
		if (fields.size() != 3)
			throw ConfigError(where + ": expected 3 fields");
		std::size_t i = 0, j = 0;
		double w = 0.0;
		try {
			i = std::stoul(fields[0]);
			j = std::stoul(fields[1]);
			w = std::stod(fields[2]);
		} catch (const std::exception &) {
			throw ConfigError(where + ": bad edge entry");
		}
		if (i >= g.size || j >= g.size || i == j)
			throw ConfigError(where + ": edge endpoints out of range");
		g.set(i, j, w);
	}
	g.edge_count = g.count_edges();
	return g;
}

} // namespace textnet
