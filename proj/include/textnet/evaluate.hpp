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
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "textnet/error.hpp"
#include "textnet/io_util.hpp"
#include "textnet/rng.hpp"
#include "textnet/simgraph.hpp"

namespace textnet {

using Grouping = std::unordered_map<std::string, std::string>; // id -> group label

/*
 * Mean pairwise weight between and within groups. Diagonal cells average over
 * distinct ordered pairs; a single-member group has no such pair and its
 * diagonal is NaN, reported as missing rather than zero. Group order is the
 * sorted label order.
 */
struct GroupCorrelationMatrix {
	std::vector<std::string> labels;
	Matrix values;

	bool diagonal_defined(std::size_t g) const {
		return !std::isnan(values(g, g));
	}
};

inline GroupCorrelationMatrix group_correlation(const SimilarityGraph &g, const Grouping &grouping) {
	std::vector<std::string> unlabeled;
	for (const auto &id : g.node_ids) {
		if (!grouping.count(id))
			unlabeled.push_back(id);
	}
	if (!unlabeled.empty()) {
		std::string joined;
		for (std::size_t i = 0; i < std::min<std::size_t>(unlabeled.size(), 10); ++i)
			joined += (i ? ", " : "") + unlabeled[i];
		if (unlabeled.size() > 10)
			joined += ", ...";
		throw Error("ungrouped node ids: " + joined);
	}

	std::map<std::string, std::size_t> label_index;
	for (const auto &id : g.node_ids)
		label_index.emplace(grouping.at(id), 0);
	if (label_index.empty())
		throw Error("grouping covers no nodes");

	GroupCorrelationMatrix out;
	for (auto &[label, idx] : label_index) {
		idx = out.labels.size();
		out.labels.push_back(label);
	}

	const std::size_t groups = out.labels.size();
	Matrix sums(groups, groups);
	Matrix counts(groups, groups);
	std::vector<std::size_t> membership(g.size);
	for (std::size_t i = 0; i < g.size; ++i)
		membership[i] = label_index.at(grouping.at(g.node_ids[i]));

	for (std::size_t i = 0; i < g.size; ++i) {
		for (std::size_t j = 0; j < g.size; ++j) {
			if (i == j)
				continue;
			sums(membership[i], membership[j]) += g.at(i, j);
			counts(membership[i], membership[j]) += 1.0;
		}
	}

	out.values = Matrix(groups, groups);
	for (std::size_t a = 0; a < groups; ++a) {
		for (std::size_t b = 0; b < groups; ++b) {
			out.values(a, b) = counts(a, b) > 0.0 ? sums(a, b) / counts(a, b)
							      : std::numeric_limits<double>::quiet_NaN();
		}
	}
	return out;
}

/*
 * Per group: the fraction of other groups whose mean correlation with it is
 * at least its own internal mean. Groups with an undefined diagonal are
 * skipped and listed separately.
 */
struct HeterophilyReport {
	std::map<std::string, double> fractions;
	std::vector<std::string> skipped;
};

inline HeterophilyReport heterophily_fraction(const GroupCorrelationMatrix &gcm) {
	const std::size_t groups = gcm.labels.size();
	if (groups < 2)
		throw ConfigError("heterophily needs at least 2 groups");

	HeterophilyReport report;
	for (std::size_t g = 0; g < groups; ++g) {
		if (!gcm.diagonal_defined(g)) {
			report.skipped.push_back(gcm.labels[g]);
			continue;
		}
		const double own = gcm.values(g, g);
		std::size_t outliers = 0;
		for (std::size_t other = 0; other < groups; ++other) {
			if (other != g && gcm.values(other, g) >= own)
				++outliers;
		}
		report.fractions[gcm.labels[g]] = static_cast<double>(outliers) / static_cast<double>(groups - 1);
	}
	return report;
}

enum class NmiVariant { arithmetic, geometric, min, max };

/*
 * Normalized mutual information between two labelings of the same id set,
 * natural-log entropies. The arithmetic variant is 2I / (H(U) + H(V)).
 * Two single-cluster labelings agree perfectly (1); exactly one single
 * cluster shares no information (0).
 */
inline double nmi(const Grouping &u, const Grouping &v, NmiVariant variant = NmiVariant::arithmetic) {
	if (u.size() != v.size())
		throw Error("labelings cover different id sets");
	std::map<std::string, std::size_t> u_count, v_count;
	std::map<std::pair<std::string, std::string>, std::size_t> joint;
	for (const auto &[id, lu] : u) {
		auto it = v.find(id);
		if (it == v.end())
			throw Error("labelings cover different id sets, missing: " + id);
		++u_count[lu];
		++v_count[it->second];
		++joint[{lu, it->second}];
	}
	const double n = static_cast<double>(u.size());
	if (n == 0.0)
		throw Error("labelings are empty");

	auto entropy = [&](const std::map<std::string, std::size_t> &counts) {
		double h = 0.0;
		for (const auto &[label, count] : counts) {
			const double p = static_cast<double>(count) / n;
			h -= p * std::log(p);
		}
		return h;
	};
	const double hu = entropy(u_count);
	const double hv = entropy(v_count);
	if (hu == 0.0 && hv == 0.0)
		return 1.0;

	double info = 0.0;
	for (const auto &[labels, count] : joint) {
		const double pxy = static_cast<double>(count) / n;
		const double px = static_cast<double>(u_count[labels.first]) / n;
		const double py = static_cast<double>(v_count[labels.second]) / n;
		info += pxy * std::log(pxy / (px * py));
	}

	double denom = 0.0;
	switch (variant) {
	case NmiVariant::arithmetic:
		denom = 0.5 * (hu + hv);
		break;
	case NmiVariant::geometric:
		denom = std::sqrt(hu * hv);
		break;
	case NmiVariant::min:
		denom = std::min(hu, hv);
		break;
	case NmiVariant::max:
		denom = std::max(hu, hv);
		break;
	}
	if (denom == 0.0)
		return 0.0;
	return std::clamp(info / denom, 0.0, 1.0);
}

inline NmiVariant nmi_variant_from_string(const std::string &name) {
	if (name == "arithmetic")
		return NmiVariant::arithmetic;
	if (name == "geometric")
		return NmiVariant::geometric;
	if (name == "min")
		return NmiVariant::min;
	if (name == "max")
		return NmiVariant::max;
	throw ConfigError("unknown nmi variant: " + name + " (use arithmetic, geometric, min or max)");
}

/*
 * Synthetic benchmark: blocks of nodes with a common within-block mean
 * weight, a global cross-block mean, gaussian noise, and optional unplanted
 * background nodes (labeled "misc"). Weights are clipped to [-0.999, 0.999];
 * the diagonal stays zero and no threshold is applied.
 */
struct PlantedSpec {
	struct Block {
		std::size_t size = 0;
		double within_mean = 0.0;
	};
	std::vector<Block> blocks;
	double cross_mean = 0.0;
	double noise_sd = 0.0;
	std::size_t background = 0;
	std::uint64_t seed = 0;
};

struct PlantedGraph {
	SimilarityGraph graph;
	Grouping labels;
};

inline PlantedGraph generate_planted(const PlantedSpec &spec) {
	if (spec.blocks.empty())
		throw ConfigError("planted spec needs at least one block");
	for (const auto &block : spec.blocks) {
		if (block.size < 2)
			throw ConfigError("planted blocks need at least 2 nodes");
		if (block.within_mean < 0.0 || block.within_mean >= 1.0)
			throw ConfigError("planted within-block mean must be in [0, 1)");
	}
	if (spec.cross_mean < 0.0 || spec.cross_mean >= 1.0)
		throw ConfigError("planted cross-block mean must be in [0, 1)");
	if (spec.noise_sd < 0.0)
		throw ConfigError("planted noise sd must be nonnegative");

	std::size_t n = spec.background;
	for (const auto &block : spec.blocks)
		n += block.size;

	PlantedGraph out;
	out.graph.size = n;
	out.graph.adjacency.assign(n * n, 0.0);
	out.graph.threshold = 0.0;

	std::vector<std::size_t> block_of(n, spec.blocks.size()); // block index, blocks.size() = background
	std::size_t next = 0;
	for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
		for (std::size_t i = 0; i < spec.blocks[b].size; ++i)
			block_of[next++] = b;
	}

	char id_buf[24];
	for (std::size_t i = 0; i < n; ++i) {
		std::snprintf(id_buf, sizeof(id_buf), "d%04zu", i + 1);
		out.graph.node_ids.emplace_back(id_buf);
		const std::size_t b = block_of[i];
		out.labels[out.graph.node_ids.back()] =
			b < spec.blocks.size() ? "block" + std::to_string(b + 1) : "misc";
	}

	Rng rng(spec.seed);
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = i + 1; j < n; ++j) {
			const bool same = block_of[i] == block_of[j] && block_of[i] < spec.blocks.size();
			const double mean = same ? spec.blocks[block_of[i]].within_mean : spec.cross_mean;
			const double w = std::clamp(mean + spec.noise_sd * rng.normal(), -0.999, 0.999);
			out.graph.set(i, j, w);
		}
	}
	out.graph.edge_count = out.graph.count_edges();
	return out;
}

inline PlantedSpec planted_spec_from_json(const nlohmann::json &doc, const std::string &context) {
	if (!doc.is_object() || !doc.contains("blocks") || !doc["blocks"].is_array())
		throw ConfigError(context + ": planted spec needs a blocks array");
	PlantedSpec spec;
	for (const auto &jb : doc["blocks"]) {
		PlantedSpec::Block block;
		block.size = jb.at("size").get<std::size_t>();
		block.within_mean = jb.at("within_mean").get<double>();
		spec.blocks.push_back(block);
	}
	spec.cross_mean = doc.value("cross_mean", 0.0);
	spec.noise_sd = doc.value("noise_sd", 0.0);
	spec.background = doc.value("background", std::size_t(0));
	spec.seed = doc.value("seed", std::uint64_t(0));
	return spec;
}

inline nlohmann::json planted_spec_to_json(const PlantedSpec &spec) {
	nlohmann::json doc;
	doc["blocks"] = nlohmann::json::array();
	for (const auto &block : spec.blocks)
		doc["blocks"].push_back({{"size", block.size}, {"within_mean", block.within_mean}});
	doc["cross_mean"] = spec.cross_mean;
	doc["noise_sd"] = spec.noise_sd;
	doc["background"] = spec.background;
	doc["seed"] = spec.seed;
	return doc;
}

inline PlantedSpec load_planted_spec(const std::string &path) {
	nlohmann::json doc;
	try {
		doc = nlohmann::json::parse(read_text_file(path));
	} catch (const nlohmann::json::parse_error &e) {
		throw ConfigError(path + ": malformed planted spec: " + std::string(e.what()));
	}
	return planted_spec_from_json(doc, path);
}

inline void write_gcm_csv(const GroupCorrelationMatrix &gcm, const std::string &path) {
	std::ostringstream out;
	out << "group";
	for (const auto &label : gcm.labels)
		out << "," << csv_escape(label);
	out << "\n";
	for (std::size_t a = 0; a < gcm.labels.size(); ++a) {
		out << csv_escape(gcm.labels[a]);
		for (std::size_t b = 0; b < gcm.labels.size(); ++b) {
			out << ",";
			if (!std::isnan(gcm.values(a, b)))
				out << format_fixed(gcm.values(a, b), 6);
		}
		out << "\n";
	}
	write_text_file(path, out.str());
}

inline void write_heterophily_csv(const HeterophilyReport &report, const std::string &path) {
	std::ostringstream out;
	out << "group,fraction\n";
	for (const auto &[label, fraction] : report.fractions)
		out << csv_escape(label) << "," << format_fixed(fraction, 6) << "\n";
	for (const auto &label : report.skipped)
		out << csv_escape(label) << ",\n";
	write_text_file(path, out.str());
}

} // namespace textnet
