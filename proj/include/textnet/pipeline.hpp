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

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "textnet/corpus.hpp"
#include "textnet/error.hpp"
#include "textnet/evaluate.hpp"
#include "textnet/extraction.hpp"
#include "textnet/io_util.hpp"
#include "textnet/lsa.hpp"
#include "textnet/merge.hpp"
#include "textnet/simgraph.hpp"
#include "textnet/vectorize.hpp"

namespace textnet {

/*
 * Run configuration. Paths read from a config file are resolved relative to
 * the file's directory; paths set on the command line are taken as given.
 * outdir and threads never affect computed results, so they are excluded
 * from the configuration hash used for stage reuse.
 */
struct PipelineConfig {
	std::string corpus;
	std::string corpus_format = "auto"; // auto | jsonl | csv
	std::string dictionary;             // optional spelling corrections CSV
	std::string stopwords;              // optional stopword list, else built-in
	std::string patterns;               // optional replacement pattern JSON, else built-in
	std::size_t min_df = 1;
	std::size_t rank = 0; // 0: choose by energy fraction
	double rank_fraction = 0.8;
	std::size_t rank_cap = 300;
	double tau = 0.2;
	std::size_t chunk_size = 200;
	double rho = 0.85;
	std::size_t min_residual = 30;
	std::size_t restarts = 20;
	TabuParams tabu;
	std::uint64_t seed = 42;
	std::string nmi_variant = "arithmetic";
	std::string outdir;
	unsigned threads = 0;

	void set(const std::string &key, const std::string &value, const std::string &context);
	void validate() const;
	std::string canonical_text() const;

	std::string config_hash() const {
		return fnv1a64_hex(canonical_text());
	}

	static PipelineConfig from_file(const std::string &path);
};

namespace pipeline_detail {

inline std::size_t parse_size(const std::string &value, const std::string &context) {
	try {
		std::size_t pos = 0;
		const unsigned long long v = std::stoull(value, &pos);
		if (pos != value.size())
			throw std::invalid_argument(value);
		return static_cast<std::size_t>(v);
	} catch (const std::exception &) {
		throw ConfigError(context + ": expected a nonnegative integer, got '" + value + "'");
	}
}

inline double parse_double(const std::string &value, const std::string &context) {
	try {
		std::size_t pos = 0;
		const double v = std::stod(value, &pos);
		if (pos != value.size())
			throw std::invalid_argument(value);
		return v;
	} catch (const std::exception &) {
		throw ConfigError(context + ": expected a number, got '" + value + "'");
	}
}

} // namespace pipeline_detail

inline void PipelineConfig::set(const std::string &key, const std::string &value, const std::string &context) {
	using pipeline_detail::parse_double;
	using pipeline_detail::parse_size;
	if (key == "corpus")
		corpus = value;
	else if (key == "corpus_format")
		corpus_format = value;
	else if (key == "dictionary")
		dictionary = value;
	else if (key == "stopwords")
		stopwords = value;
	else if (key == "patterns")
		patterns = value;
	else if (key == "min_df")
		min_df = parse_size(value, context);
	else if (key == "rank")
		rank = parse_size(value, context);
	else if (key == "rank_fraction")
		rank_fraction = parse_double(value, context);
	else if (key == "rank_cap")
		rank_cap = parse_size(value, context);
	else if (key == "tau")
		tau = parse_double(value, context);
	else if (key == "chunk_size")
		chunk_size = parse_size(value, context);
	else if (key == "rho")
		rho = parse_double(value, context);
	else if (key == "min_residual")
		min_residual = parse_size(value, context);
	else if (key == "restarts")
		restarts = parse_size(value, context);
	else if (key == "tenure")
		tabu.tenure = parse_size(value, context);
	else if (key == "stall_limit")
		tabu.stall_limit = parse_size(value, context);
	else if (key == "max_moves")
		tabu.max_moves = parse_size(value, context);
	else if (key == "seed")
		seed = static_cast<std::uint64_t>(parse_size(value, context));
	else if (key == "nmi_variant")
		nmi_variant = value;
	else if (key == "outdir")
		outdir = value;
	else if (key == "threads")
		threads = static_cast<unsigned>(parse_size(value, context));
	else
		throw ConfigError(context + ": unknown config key: " + key);
}

inline void PipelineConfig::validate() const {
	if (corpus.empty())
		throw ConfigError("corpus path is required");
	if (!std::filesystem::exists(corpus))
		throw ConfigError("corpus file does not exist: " + corpus);
	for (const auto &[label, path] :
	     {std::pair<const char *, const std::string &>{"dictionary", dictionary},
	      {"stopwords", stopwords},
	      {"patterns", patterns}}) {
		if (!path.empty() && !std::filesystem::exists(path))
			throw ConfigError(std::string(label) + " file does not exist: " + path);
	}
	if (corpus_format != "auto" && corpus_format != "jsonl" && corpus_format != "csv")
		throw ConfigError("corpus_format must be auto, jsonl or csv");
	if (min_df < 1)
		throw ConfigError("min_df must be at least 1");
	if (rank_fraction <= 0.0 || rank_fraction > 1.0)
		throw ConfigError("rank_fraction must be in (0, 1]");
	if (rank_cap < 1)
		throw ConfigError("rank_cap must be at least 1");
	if (tau < 0.0 || tau >= 1.0)
		throw ConfigError("tau must be in [0, 1)");
	if (chunk_size < 2)
		throw ConfigError("chunk_size must be at least 2");
	if (rho <= 0.0 || rho > 1.0)
		throw ConfigError("rho must be in (0, 1]");
	if (restarts < 1)
		throw ConfigError("restarts must be at least 1");
	if (outdir.empty())
		throw ConfigError("outdir is required");
	nmi_variant_from_string(nmi_variant);
}

inline std::string PipelineConfig::canonical_text() const {
	std::map<std::string, std::string> kv;
	kv["corpus"] = corpus;
	kv["corpus_format"] = corpus_format;
	kv["dictionary"] = dictionary;
	kv["stopwords"] = stopwords;
	kv["patterns"] = patterns;
	kv["min_df"] = std::to_string(min_df);
	kv["rank"] = std::to_string(rank);
	kv["rank_fraction"] = format_double(rank_fraction);
	kv["rank_cap"] = std::to_string(rank_cap);
	kv["tau"] = format_double(tau);
	kv["chunk_size"] = std::to_string(chunk_size);
	kv["rho"] = format_double(rho);
	kv["min_residual"] = std::to_string(min_residual);
	kv["restarts"] = std::to_string(restarts);
	kv["tenure"] = std::to_string(tabu.tenure);
	kv["stall_limit"] = std::to_string(tabu.stall_limit);
	kv["max_moves"] = std::to_string(tabu.max_moves);
	kv["seed"] = std::to_string(seed);
	kv["nmi_variant"] = nmi_variant;
	std::string out;
	for (const auto &[key, value] : kv)
		out += key + "=" + value + "\n";
	return out;
}

inline PipelineConfig PipelineConfig::from_file(const std::string &path) {
	if (!std::filesystem::exists(path))
		throw ConfigError("config file does not exist: " + path);
	PipelineConfig config;
	const auto lines = split_lines(read_text_file(path));
	const std::filesystem::path base = std::filesystem::path(path).parent_path();
	for (std::size_t i = 0; i < lines.size(); ++i) {
		const std::string line = trim(lines[i]);
		if (line.empty() || line[0] == '#')
			continue;
		const auto eq = line.find('=');
		if (eq == std::string::npos)
			throw ConfigError(path + ":" + std::to_string(i + 1) + ": expected key = value");
		const std::string key = trim(line.substr(0, eq));
		const std::string value = trim(line.substr(eq + 1));
		config.set(key, value, path + ":" + std::to_string(i + 1));
	}
	// Paths are relative to the config file, not the working directory.
	auto resolve = [&](std::string &p) {
		if (!p.empty() && std::filesystem::path(p).is_relative())
			p = (base / p).lexically_normal().string();
	};
	resolve(config.corpus);
	resolve(config.dictionary);
	resolve(config.stopwords);
	resolve(config.patterns);
	resolve(config.outdir);
	return config;
}

enum class Stage { ingest, vectorize, embed, graph, extract, merge, evaluate };

inline const std::array<const char *, 7> &stage_names() {
	static const std::array<const char *, 7> names = {
		"ingest", "vectorize", "embed", "graph", "extract", "merge", "evaluate",
	};
	return names;
}

inline const char *stage_name(Stage stage) {
	return stage_names()[static_cast<std::size_t>(stage)];
}

inline Stage stage_from_string(const std::string &name) {
	for (std::size_t i = 0; i < stage_names().size(); ++i) {
		if (name == stage_names()[i])
			return static_cast<Stage>(i);
	}
	throw ConfigError("unknown stage: " + name);
}

struct StageReport {
	std::string stage;
	bool skipped = false;
	double seconds = 0.0;
	std::string note;
};

namespace pipeline_detail {

inline std::string artifact_path(const PipelineConfig &config, const std::string &name) {
	return (std::filesystem::path(config.outdir) / name).string();
}

inline std::string require_artifact(const PipelineConfig &config, const std::string &name,
				    const std::string &producer) {
	const std::string path = artifact_path(config, name);
	if (!std::filesystem::exists(path))
		throw MissingArtifactError("missing artifact " + name + "; run stage " + producer + " first");
	return path;
}

/*
 * Stage ledger: records, per completed stage, the configuration hash, the
 * hashes of every input consumed and every artifact produced. A stage whose
 * entry matches the current inputs and whose artifacts still verify is
 * skipped on rerun. The file contains nothing volatile, so identical runs
 * produce byte-identical manifests (timings live in timings.json).
 */
class Manifest {
public:
	static Manifest load_or_empty(const std::string &path) {
		Manifest m;
		if (!std::filesystem::exists(path)) {
			m.m_doc = {{"schema", "1.0.0"}, {"stages", nlohmann::json::object()}};
			return m;
		}
		try {
			m.m_doc = nlohmann::json::parse(read_text_file(path));
		} catch (const nlohmann::json::parse_error &e) {
			throw ConfigError(path + ": malformed manifest: " + std::string(e.what()));
		}
		if (!m.m_doc.is_object() || !m.m_doc.contains("stages") || !m.m_doc["stages"].is_object())
			throw ConfigError(path + ": malformed manifest: missing stages object");
		return m;
	}

	bool stage_current(const PipelineConfig &config, const std::string &stage,
			   const std::map<std::string, std::string> &inputs) const {
		if (!m_doc["stages"].contains(stage))
			return false;
		const auto &entry = m_doc["stages"][stage];
		if (entry.value("config_hash", "") != config.config_hash())
			return false;
		nlohmann::json want(inputs);
		if (entry.value("inputs", nlohmann::json::object()) != want)
			return false;
		if (!entry.contains("artifacts") || !entry["artifacts"].is_object() || entry["artifacts"].empty())
			return false;
		for (const auto &[name, hash] : entry["artifacts"].items()) {
			const std::string path = artifact_path(config, name);
			if (!std::filesystem::exists(path) || hash_file(path) != hash.get<std::string>())
				return false;
		}
		return true;
	}

	void record(const PipelineConfig &config, const std::string &stage,
		    const std::map<std::string, std::string> &inputs, const std::vector<std::string> &artifacts) {
		nlohmann::json entry;
		entry["config_hash"] = config.config_hash();
		entry["inputs"] = nlohmann::json(inputs);
		nlohmann::json arts = nlohmann::json::object();
		for (const auto &name : artifacts)
			arts[name] = hash_file(artifact_path(config, name));
		entry["artifacts"] = std::move(arts);
		m_doc["stages"][stage] = std::move(entry);
	}

	void save(const std::string &path) const {
		write_text_file(path, m_doc.dump(2) + "\n");
	}

private:
	nlohmann::json m_doc;
};

inline void write_tokenized(const std::vector<Document> &docs, const std::string &path) {
	std::ostringstream out;
	for (const auto &doc : docs) {
		nlohmann::json rec;
		rec["id"] = doc.id;
		rec["tokens"] = doc.tokens;
		rec["tags"] = doc.tags;
		out << rec.dump() << "\n";
	}
	write_text_file(path, out.str());
}

inline std::vector<Document> read_tokenized(const std::string &path) {
	std::vector<Document> docs;
	const auto lines = split_lines(read_text_file(path));
	for (std::size_t i = 0; i < lines.size(); ++i) {
		if (trim(lines[i]).empty())
			continue;
		nlohmann::json rec;
		try {
			rec = nlohmann::json::parse(lines[i]);
		} catch (const nlohmann::json::parse_error &e) {
			throw ConfigError(path + ":" + std::to_string(i + 1) + ": malformed record: " + std::string(e.what()));
		}
		Document doc;
		doc.id = rec.at("id").get<std::string>();
		doc.tokens = rec.at("tokens").get<std::vector<std::string>>();
		doc.tags = rec.value("tags", std::vector<std::string>{});
		docs.push_back(std::move(doc));
	}
	return docs;
}

inline void write_surfaces(const SurfaceForms &surfaces, const std::string &path) {
	nlohmann::json doc;
	doc["schema"] = "1.0.0";
	doc["surfaces"] = nlohmann::json(surfaces.items());
	write_text_file(path, doc.dump(2) + "\n");
}

inline SurfaceForms read_surfaces(const std::string &path) {
	nlohmann::json doc;
	try {
		doc = nlohmann::json::parse(read_text_file(path));
	} catch (const nlohmann::json::parse_error &e) {
		throw ConfigError(path + ": malformed surfaces file: " + std::string(e.what()));
	}
	std::map<std::string, std::string> items;
	if (doc.contains("surfaces"))
		items = doc["surfaces"].get<std::map<std::string, std::string>>();
	return SurfaceForms::from_items(items);
}

inline void write_vocabulary(const Vocabulary &vocab, const std::string &path) {
	nlohmann::json arr = nlohmann::json::array();
	for (std::size_t t = 0; t < vocab.size(); ++t) {
		arr.push_back({{"stem", vocab.stems[t]},
			       {"display", vocab.display[t]},
			       {"df", vocab.doc_frequency[t]}});
	}
	nlohmann::json doc;
	doc["schema"] = "1.0.0";
	doc["terms"] = std::move(arr);
	write_text_file(path, doc.dump(2) + "\n");
}

inline void write_doc_ids(const std::vector<std::string> &ids, const std::string &path) {
	nlohmann::json doc;
	doc["schema"] = "1.0.0";
	doc["doc_ids"] = ids;
	write_text_file(path, doc.dump(2) + "\n");
}

inline std::vector<std::string> read_doc_ids(const std::string &path) {
	nlohmann::json doc;
	try {
		doc = nlohmann::json::parse(read_text_file(path));
	} catch (const nlohmann::json::parse_error &e) {
		throw ConfigError(path + ": malformed doc id file: " + std::string(e.what()));
	}
	return doc.at("doc_ids").get<std::vector<std::string>>();
}

struct StageSpec {
	std::vector<std::pair<std::string, std::string>> artifact_inputs; // filename, producer stage
};

inline const StageSpec &stage_spec(Stage stage) {
	static const std::array<StageSpec, 7> specs = {{
		/* ingest */ {{}},
		/* vectorize */ {{{"tokenized.jsonl", "ingest"}, {"surfaces.json", "ingest"}}},
		/* embed */ {{{"tfidf.mtx", "vectorize"}, {"doc_ids.json", "vectorize"}}},
		/* graph */ {{{"embeddings.csv", "embed"}, {"lsa_meta.json", "embed"}}},
		/* extract */ {{{"graph_edges.csv", "graph"}, {"graph_meta.json", "graph"}}},
		/* merge */ {{{"partitions.json", "extract"}, {"graph_edges.csv", "graph"}, {"graph_meta.json", "graph"}}},
		/* evaluate */
		{{{"result.json", "merge"}, {"embeddings.csv", "embed"}, {"tokenized.jsonl", "ingest"}}},
	}};
	return specs[static_cast<std::size_t>(stage)];
}

struct StageOutcome {
	std::vector<std::string> artifacts;
	std::string note;
};

inline StageOutcome run_ingest(const PipelineConfig &config) {
	CorpusFormat format = CorpusFormat::auto_detect;
	if (config.corpus_format == "jsonl")
		format = CorpusFormat::jsonl;
	else if (config.corpus_format == "csv")
		format = CorpusFormat::csv;

	std::vector<Document> docs = load_corpus(config.corpus, format);
	const SpellingDictionary dict =
		config.dictionary.empty() ? SpellingDictionary() : SpellingDictionary::from_csv(config.dictionary);
	const StopwordSet stops = config.stopwords.empty() ? default_stopwords() : load_stopwords(config.stopwords);
	const NormalizationPatterns patterns = config.patterns.empty()
		? NormalizationPatterns::defaults()
		: NormalizationPatterns::from_json_file(config.patterns);

	const SurfaceForms surfaces = normalize_corpus(docs, dict, stops, patterns, config.threads);
	write_tokenized(docs, artifact_path(config, "tokenized.jsonl"));
	write_surfaces(surfaces, artifact_path(config, "surfaces.json"));
	return {{"tokenized.jsonl", "surfaces.json"},
		std::to_string(docs.size()) + " documents tokenized"};
}

inline StageOutcome run_vectorize(const PipelineConfig &config) {
	const auto docs = read_tokenized(require_artifact(config, "tokenized.jsonl", "ingest"));
	const auto surfaces = read_surfaces(require_artifact(config, "surfaces.json", "ingest"));
	const TermDocMatrix matrix = build_tfidf_matrix(docs, surfaces, config.min_df);

	write_matrix_market(matrix, artifact_path(config, "tfidf.mtx"));
	write_vocabulary(matrix.vocabulary, artifact_path(config, "vocabulary.json"));
	write_doc_ids(matrix.doc_ids, artifact_path(config, "doc_ids.json"));

	StageOutcome outcome;
	outcome.artifacts = {"tfidf.mtx", "vocabulary.json", "doc_ids.json"};
	if (matrix.term_count * matrix.doc_count <= 400000) {
		write_dense_csv(matrix, artifact_path(config, "tfidf_dense.csv"));
		outcome.artifacts.push_back("tfidf_dense.csv");
	}
	outcome.note = std::to_string(matrix.term_count) + " terms, " + std::to_string(matrix.doc_count) +
		       " documents, " + std::to_string(matrix.nonzeros()) + " nonzeros";
	return outcome;
}

inline StageOutcome run_embed(const PipelineConfig &config) {
	TermDocMatrix matrix = read_matrix_market(require_artifact(config, "tfidf.mtx", "vectorize"));
	matrix.doc_ids = read_doc_ids(require_artifact(config, "doc_ids.json", "vectorize"));

	const std::size_t bound = std::min(matrix.term_count, matrix.doc_count);
	SvdOptions opts;

	LsaFactors factors;
	std::size_t k_used = 0;
	std::size_t probe = 0;
	double captured = 0.0;
	const double total = frobenius_norm_sq(matrix);

	if (config.rank > 0) {
		factors = truncated_svd(matrix, config.rank, config.seed, opts);
		k_used = factors.rank;
		probe = config.rank;
		for (double s : factors.singular_values)
			captured += s * s;
	} else {
		/*
		 * The energy denominator is the exact squared Frobenius norm, so
		 * only enough of the decay to reach the fraction is ever computed.
		 * The probe rank doubles until the energy target, the cap or the
		 * full rank is reached.
		 */
		const std::size_t limit = std::min(bound, config.rank_cap);
		probe = std::min<std::size_t>(32, limit);
		for (;;) {
			factors = truncated_svd(matrix, probe, config.seed, opts);
			captured = 0.0;
			for (double s : factors.singular_values)
				captured += s * s;
			if (captured >= config.rank_fraction * total || probe >= limit ||
			    factors.rank < probe)
				break;
			probe = std::min(probe * 2, limit);
		}
		double cum = 0.0;
		std::size_t k_energy = factors.rank;
		for (std::size_t i = 0; i < factors.rank; ++i) {
			cum += factors.singular_values[i] * factors.singular_values[i];
			if (cum >= config.rank_fraction * total) {
				k_energy = i + 1;
				break;
			}
		}
		// Correlations need at least two dimensions.
		k_used = std::min(std::max<std::size_t>(2, k_energy), factors.rank);
	}

	Matrix embeddings = factors.doc_factors.columns(0, k_used);
	write_embeddings_csv(embeddings, matrix.doc_ids, artifact_path(config, "embeddings.csv"));
	write_singular_values_csv(factors.singular_values, artifact_path(config, "singular_values.csv"));

	nlohmann::json meta;
	meta["schema"] = "1.0.0";
	meta["k"] = k_used;
	meta["probe_rank"] = probe;
	meta["rank_found"] = factors.rank;
	meta["seed"] = config.seed;
	meta["iterations"] = factors.iterations;
	meta["rank_fraction"] = config.rank_fraction;
	meta["rank_cap"] = config.rank_cap;
	meta["total_energy"] = total;
	meta["captured_energy"] = captured;
	write_text_file(artifact_path(config, "lsa_meta.json"), meta.dump(2) + "\n");

	std::ostringstream note;
	note << "k=" << k_used << " (" << factors.iterations << " iterations, energy "
	     << format_fixed(total > 0 ? captured / total : 0.0, 3) << ")";
	return {{"embeddings.csv", "singular_values.csv", "lsa_meta.json"}, note.str()};
}

inline StageOutcome run_graph(const PipelineConfig &config) {
	auto [ids, embeddings] = read_embeddings_csv(require_artifact(config, "embeddings.csv", "embed"));
	nlohmann::json meta = nlohmann::json::parse(read_text_file(require_artifact(config, "lsa_meta.json", "embed")));

	const SimilarityGraph g = build_graph(embeddings, ids, config.tau, config.threads);
	write_graph(g, artifact_path(config, "graph_edges.csv"), artifact_path(config, "graph_meta.json"),
		    meta.value("k", std::size_t(0)), config.seed);

	return {{"graph_edges.csv", "graph_meta.json"},
		"N=" + std::to_string(g.size) + ", M=" + std::to_string(g.edge_count) +
			", tau=" + format_fixed(config.tau, 2)};
}

inline StageOutcome run_extract(const PipelineConfig &config) {
	const SimilarityGraph g = read_graph(require_artifact(config, "graph_edges.csv", "graph"),
					     require_artifact(config, "graph_meta.json", "graph"));

	const PartitionPlan plan = random_partition(g.node_ids, config.chunk_size, config.seed);

	std::unordered_map<std::string, std::size_t> index_of;
	for (std::size_t i = 0; i < g.size; ++i)
		index_of.emplace(g.node_ids[i], i);

	nlohmann::json results = nlohmann::json::array();
	std::size_t communities = 0;
	for (std::size_t p = 0; p < plan.partitions.size(); ++p) {
		std::vector<std::size_t> indices;
		indices.reserve(plan.partitions[p].size());
		for (const auto &id : plan.partitions[p])
			indices.push_back(index_of.at(id));
		const SimilarityGraph sub = subgraph(g, indices);
		const ExtractionResult result = extract_all(sub, config.min_residual, config.restarts,
							    config.seed + 1000 * (p + 1), config.tabu,
							    config.threads, p + 1);
		communities += result.communities.size();
		results.push_back(extraction_to_json(result));
	}

	nlohmann::json doc;
	doc["schema"] = "1.0.0";
	doc["plan"] = {{"chunk_size", plan.chunk_size}, {"seed", plan.seed}};
	doc["plan"]["partitions"] = plan.partitions;
	doc["results"] = std::move(results);
	write_text_file(artifact_path(config, "partitions.json"), doc.dump(2) + "\n");

	return {{"partitions.json"}, std::to_string(plan.partitions.size()) + " partitions, " +
					     std::to_string(communities) + " communities"};
}

inline StageOutcome run_merge(const PipelineConfig &config) {
	const SimilarityGraph g = read_graph(require_artifact(config, "graph_edges.csv", "graph"),
					     require_artifact(config, "graph_meta.json", "graph"));
	nlohmann::json doc;
	try {
		doc = nlohmann::json::parse(read_text_file(require_artifact(config, "partitions.json", "extract")));
	} catch (const nlohmann::json::parse_error &e) {
		throw ConfigError(std::string("partitions.json: malformed: ") + e.what());
	}

	std::vector<ExtractionResult> per_partition;
	for (const auto &jr : doc.at("results"))
		per_partition.push_back(extraction_from_json(jr, "partitions.json"));

	const MergeOutcome outcome = merge_communities(g, per_partition, config.rho);
	write_extraction(outcome.result, artifact_path(config, "result.json"));
	write_merge_report(outcome.decisions, artifact_path(config, "merge_report.csv"));

	std::size_t fused = 0;
	for (const auto &d : outcome.decisions)
		fused += d.merged ? 1 : 0;
	return {{"result.json", "merge_report.csv"},
		std::to_string(outcome.result.communities.size()) + " communities after merge (" +
			std::to_string(fused) + " pair merges), " +
			std::to_string(outcome.result.residual.size()) + " residual"};
}

inline StageOutcome run_evaluate(const PipelineConfig &config) {
	const ExtractionResult result = read_extraction(require_artifact(config, "result.json", "merge"));
	auto [ids, embeddings] = read_embeddings_csv(require_artifact(config, "embeddings.csv", "embed"));
	const auto docs = read_tokenized(require_artifact(config, "tokenized.jsonl", "ingest"));

	Grouping extraction_groups;
	for (const auto &community : result.communities) {
		const std::string label = "c" + std::to_string(community.iteration);
		for (const auto &id : community.members)
			extraction_groups[id] = label;
	}
	for (const auto &id : result.residual)
		extraction_groups[id] = "misc";

	// Group statistics are taken over raw correlations, not the tau-cut graph.
	const SimilarityGraph raw = build_graph(embeddings, ids, 0.0, config.threads);
	const GroupCorrelationMatrix gcm = group_correlation(raw, extraction_groups);
	write_gcm_csv(gcm, artifact_path(config, "gcm.csv"));

	std::string heterophily_note;
	if (gcm.labels.size() >= 2) {
		write_heterophily_csv(heterophily_fraction(gcm), artifact_path(config, "heterophily.csv"));
	} else {
		write_text_file(artifact_path(config, "heterophily.csv"), "group,fraction\n");
		heterophily_note = "; heterophily skipped (fewer than 2 groups)";
	}

	// When the corpus carries tags, compare the extraction against them.
	Grouping tag_groups;
	bool any_tags = false;
	for (const auto &doc : docs) {
		std::string label = "untagged";
		if (!doc.tags.empty()) {
			any_tags = true;
			label.clear();
			for (std::size_t t = 0; t < doc.tags.size(); ++t)
				label += (t ? "|" : "") + doc.tags[t];
		}
		tag_groups[doc.id] = label;
	}

	std::ostringstream nmi_csv;
	nmi_csv << "run_a,run_b,nmi\n";
	double nmi_value = -1.0;
	if (any_tags) {
		nmi_value = nmi(extraction_groups, tag_groups, nmi_variant_from_string(config.nmi_variant));
		nmi_csv << "extraction,tags," << format_fixed(nmi_value, 6) << "\n";
	}
	write_text_file(artifact_path(config, "nmi.csv"), nmi_csv.str());

	nlohmann::json summary;
	summary["schema"] = "1.0.0";
	summary["documents"] = ids.size();
	summary["embedding_k"] = embeddings.cols();
	summary["communities"] = result.communities.size();
	summary["residual"] = result.residual.size();
	summary["groups"] = gcm.labels.size();
	if (any_tags)
		summary["nmi_vs_tags"] = nmi_value;
	write_text_file(artifact_path(config, "summary.json"), summary.dump(2) + "\n");

	std::string note = std::to_string(result.communities.size()) + " communities, " +
			   std::to_string(result.residual.size()) + " residual, " +
			   std::to_string(gcm.labels.size()) + " groups";
	if (any_tags)
		note += ", nmi(tags)=" + format_fixed(nmi_value, 3);
	return {{"gcm.csv", "heterophily.csv", "nmi.csv", "summary.json"}, note + heterophily_note};
}

} // namespace pipeline_detail

inline StageReport run_stage(Stage stage, const PipelineConfig &config) {
	using namespace pipeline_detail;
	config.validate();
	std::filesystem::create_directories(config.outdir);

	const std::string name = stage_name(stage);
	const std::string manifest_path = artifact_path(config, "manifest.json");

	std::map<std::string, std::string> inputs;
	if (stage == Stage::ingest) {
		inputs["corpus:" + config.corpus] = hash_file(config.corpus);
		if (!config.dictionary.empty())
			inputs["dictionary:" + config.dictionary] = hash_file(config.dictionary);
		if (!config.stopwords.empty())
			inputs["stopwords:" + config.stopwords] = hash_file(config.stopwords);
		if (!config.patterns.empty())
			inputs["patterns:" + config.patterns] = hash_file(config.patterns);
	} else {
		for (const auto &[artifact, producer] : stage_spec(stage).artifact_inputs)
			inputs[artifact] = hash_file(require_artifact(config, artifact, producer));
	}

	Manifest manifest = Manifest::load_or_empty(manifest_path);
	if (manifest.stage_current(config, name, inputs))
		return {name, true, 0.0, "up to date"};

	const auto start = std::chrono::steady_clock::now();
	StageOutcome outcome;
	switch (stage) {
	case Stage::ingest:
		outcome = run_ingest(config);
		break;
	case Stage::vectorize:
		outcome = run_vectorize(config);
		break;
	case Stage::embed:
		outcome = run_embed(config);
		break;
	case Stage::graph:
		outcome = run_graph(config);
		break;
	case Stage::extract:
		outcome = run_extract(config);
		break;
	case Stage::merge:
		outcome = run_merge(config);
		break;
	case Stage::evaluate:
		outcome = run_evaluate(config);
		break;
	}
	const auto stop = std::chrono::steady_clock::now();

	manifest.record(config, name, inputs, outcome.artifacts);
	manifest.save(manifest_path);

	StageReport report;
	report.stage = name;
	report.skipped = false;
	report.seconds = std::chrono::duration<double>(stop - start).count();
	report.note = outcome.note;
	return report;
}

inline std::vector<StageReport> run_all(const PipelineConfig &config) {
	std::vector<StageReport> reports;
	for (std::size_t i = 0; i < stage_names().size(); ++i)
		reports.push_back(run_stage(static_cast<Stage>(i), config));

	nlohmann::json timings;
	timings["schema"] = "1.0.0";
	timings["stages"] = nlohmann::json::object();
	for (const auto &report : reports) {
		if (!report.skipped)
			timings["stages"][report.stage] = report.seconds;
	}
	write_text_file(pipeline_detail::artifact_path(config, "timings.json"), timings.dump(2) + "\n");
	return reports;
}

} // namespace textnet
