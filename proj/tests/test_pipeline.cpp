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

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "textnet/pipeline.hpp"
#include "test_util.hpp"

using namespace textnet;

namespace {

std::string data_file(const std::string &name) {
	return std::string(TEXTNET_DATA_DIR) + "/" + name;
}

// toy settings shared by the end-to-end tests; outdir is filled per test
PipelineConfig toy_config(const std::string &outdir) {
	PipelineConfig config;
	config.corpus = data_file("toy_corpus.jsonl");
	config.stopwords = data_file("toy_stopwords.txt");
	config.dictionary = data_file("spelling_example.csv");
	config.tau = 0.0;
	config.min_residual = 0;
	config.restarts = 6;
	config.seed = 7;
	config.outdir = outdir;
	return config;
}

int run_cli(const std::string &args) {
	const std::string cmd = std::string(TEXTNET_BIN) + " " + args + " >/dev/null 2>&1";
	const int status = std::system(cmd.c_str());
	REQUIRE(status != -1);
	return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config files parse into typed settings", "[pipeline]") {
	testutil::TempDir dir("cfg");
	std::filesystem::create_directories(dir.file("sub"));
	write_text_file(dir.file("sub/c.jsonl"), "{\"id\": \"a\", \"text\": \"x\"}\n");
	write_text_file(dir.file("run.cfg"),
			"# demo\n"
			"\n"
			"corpus = sub/c.jsonl\n"
			"tau=0.35\n"
			"  chunk_size =  64\n"
			"outdir = out\n"
			"seed = 9\n");

	const auto config = PipelineConfig::from_file(dir.file("run.cfg"));
	CHECK(config.corpus == dir.file("sub/c.jsonl"));
	CHECK(config.outdir == dir.file("out"));
	CHECK(config.tau == 0.35);
	CHECK(config.chunk_size == 64);
	CHECK(config.seed == 9);
	CHECK(config.rho == 0.85); // untouched keys keep their defaults

	write_text_file(dir.file("bad_key.cfg"), "corpus = x\n\nbogus = 1\n");
	CHECK_THROWS_WITH(PipelineConfig::from_file(dir.file("bad_key.cfg")),
			  Catch::Matchers::ContainsSubstring(":3: unknown config key: bogus"));

	write_text_file(dir.file("bad_value.cfg"), "tau = warm\n");
	CHECK_THROWS_WITH(PipelineConfig::from_file(dir.file("bad_value.cfg")),
			  Catch::Matchers::ContainsSubstring("expected a number, got 'warm'"));

	write_text_file(dir.file("bad_line.cfg"), "corpus\n");
	CHECK_THROWS_WITH(PipelineConfig::from_file(dir.file("bad_line.cfg")),
			  Catch::Matchers::ContainsSubstring(":1: expected key = value"));

	CHECK_THROWS_AS(PipelineConfig::from_file(dir.file("nowhere.cfg")), ConfigError);
}

TEST_CASE("config validation rejects out-of-range settings", "[pipeline]") {
	testutil::TempDir dir("val");
	const auto good = toy_config(dir.file("out"));
	CHECK_NOTHROW(good.validate());

	auto broken = [&](auto mutate) {
		PipelineConfig c = good;
		mutate(c);
		CHECK_THROWS_AS(c.validate(), ConfigError);
	};
	broken([](PipelineConfig &c) { c.corpus.clear(); });
	broken([&](PipelineConfig &c) { c.corpus = dir.file("missing.jsonl"); });
	broken([&](PipelineConfig &c) { c.stopwords = dir.file("missing.txt"); });
	broken([](PipelineConfig &c) { c.corpus_format = "xml"; });
	broken([](PipelineConfig &c) { c.min_df = 0; });
	broken([](PipelineConfig &c) { c.rank_fraction = 0.0; });
	broken([](PipelineConfig &c) { c.rank_fraction = 1.5; });
	broken([](PipelineConfig &c) { c.rank_cap = 0; });
	broken([](PipelineConfig &c) { c.tau = 1.0; });
	broken([](PipelineConfig &c) { c.tau = -0.1; });
	broken([](PipelineConfig &c) { c.chunk_size = 1; });
	broken([](PipelineConfig &c) { c.rho = 0.0; });
	broken([](PipelineConfig &c) { c.rho = 1.2; });
	broken([](PipelineConfig &c) { c.restarts = 0; });
	broken([](PipelineConfig &c) { c.outdir.clear(); });
	broken([](PipelineConfig &c) { c.nmi_variant = "median"; });
}

TEST_CASE("the config hash ignores where results go", "[pipeline]") {
	PipelineConfig a;
	a.corpus = "c.jsonl";
	a.outdir = "out_a";
	a.threads = 1;

	PipelineConfig b = a;
	b.outdir = "somewhere_else";
	b.threads = 8;
	CHECK(a.config_hash() == b.config_hash());

	b.tau = a.tau + 0.1;
	CHECK(a.config_hash() != b.config_hash());
}

TEST_CASE("stage names round-trip", "[pipeline]") {
	for (std::size_t i = 0; i < stage_names().size(); ++i)
		CHECK(stage_from_string(stage_names()[i]) == static_cast<Stage>(i));
	CHECK_THROWS_AS(stage_from_string("polish"), ConfigError);
}

TEST_CASE("stages demand their upstream artifacts", "[pipeline]") {
	testutil::TempDir dir("missing");
	const auto config = toy_config(dir.file("out"));

	CHECK_THROWS_WITH(run_stage(Stage::extract, config),
			  Catch::Matchers::ContainsSubstring("run stage graph first"));
	CHECK_THROWS_WITH(run_stage(Stage::evaluate, config),
			  Catch::Matchers::ContainsSubstring("run stage merge first"));
	CHECK_THROWS_AS(run_stage(Stage::vectorize, config), MissingArtifactError);
}

TEST_CASE("the full pipeline runs end to end on the toy corpus", "[pipeline]") {
	testutil::TempDir dir("run");
	const auto config = toy_config(dir.file("out"));

	const auto reports = run_all(config);
	REQUIRE(reports.size() == 7);
	for (std::size_t i = 0; i < reports.size(); ++i) {
		CHECK(reports[i].stage == stage_names()[i]);
		CHECK(!reports[i].skipped);
	}

	for (const char *name : {"tokenized.jsonl", "surfaces.json", "tfidf.mtx", "vocabulary.json",
				 "doc_ids.json", "tfidf_dense.csv", "embeddings.csv", "singular_values.csv",
				 "lsa_meta.json", "graph_edges.csv", "graph_meta.json", "partitions.json",
				 "result.json", "merge_report.csv", "gcm.csv", "heterophily.csv", "nmi.csv",
				 "summary.json", "manifest.json", "timings.json"}) {
		INFO(name);
		CHECK(std::filesystem::exists(dir.file(std::string("out/") + name)));
	}

	// every document ends up in exactly one community or in the residual
	const auto result = read_extraction(dir.file("out/result.json"));
	std::vector<std::string> seen = result.residual;
	for (const auto &c : result.communities)
		seen.insert(seen.end(), c.members.begin(), c.members.end());
	std::sort(seen.begin(), seen.end());
	CHECK(seen == std::vector<std::string>{"Doc1", "Doc2", "Doc3"});

	const auto summary = nlohmann::json::parse(read_text_file(dir.file("out/summary.json")));
	CHECK(summary.at("documents") == 3);
	CHECK(summary.at("embedding_k").get<std::size_t>() >= 2);
	CHECK(summary.at("communities") == result.communities.size());
	CHECK(summary.at("residual") == result.residual.size());
	CHECK(!summary.contains("nmi_vs_tags")); // the toy corpus carries no tags

	const auto dense = testutil::read_lines(dir.file("out/tfidf_dense.csv"));
	REQUIRE(!dense.empty());
	CHECK(dense[0] == "term,Doc1,Doc2,Doc3");

	const auto nmi_lines = testutil::read_lines(dir.file("out/nmi.csv"));
	REQUIRE(nmi_lines.size() == 1);
	CHECK(nmi_lines[0] == "run_a,run_b,nmi");
}

TEST_CASE("a second run is served from the manifest", "[pipeline]") {
	testutil::TempDir dir("rerun");
	const auto config = toy_config(dir.file("out"));

	run_all(config);
	const std::string manifest_before = read_text_file(dir.file("out/manifest.json"));

	const auto reports = run_all(config);
	for (const auto &report : reports) {
		CHECK(report.skipped);
		CHECK(report.note == "up to date");
	}
	CHECK(read_text_file(dir.file("out/manifest.json")) == manifest_before);
}

TEST_CASE("identical configurations produce identical artifacts anywhere", "[pipeline]") {
	testutil::TempDir dir("twin");
	auto first = toy_config(dir.file("one"));
	auto second = toy_config(dir.file("two"));
	second.threads = 3; // thread count must not leak into any artifact

	run_all(first);
	run_all(second);

	for (const char *name : {"manifest.json", "result.json", "embeddings.csv", "summary.json",
				 "graph_edges.csv", "partitions.json"}) {
		INFO(name);
		CHECK(read_text_file(dir.file(std::string("one/") + name)) ==
		      read_text_file(dir.file(std::string("two/") + name)));
	}
}

TEST_CASE("editing an input or a setting reruns the pipeline", "[pipeline]") {
	testutil::TempDir dir("edit");
	const std::string corpus = dir.file("corpus.jsonl");
	write_text_file(corpus, "{\"id\": \"a\", \"text\": \"alpha beta gamma\"}\n"
				"{\"id\": \"b\", \"text\": \"beta gamma delta\"}\n"
				"{\"id\": \"c\", \"text\": \"delta epsilon zeta\"}\n");

	PipelineConfig config = toy_config(dir.file("out"));
	config.corpus = corpus;
	config.dictionary.clear();
	config.stopwords.clear();
	run_all(config);

	std::ofstream(corpus, std::ios::app) << "{\"id\": \"d\", \"text\": \"epsilon zeta eta\"}\n";
	const auto after_edit = run_all(config);
	for (const auto &report : after_edit)
		CHECK(!report.skipped);

	// any parameter change invalidates the whole ledger
	config.tau = 0.1;
	const auto after_tweak = run_all(config);
	for (const auto &report : after_tweak)
		CHECK(!report.skipped);
}

TEST_CASE("a damaged artifact is regenerated, downstream stays cached", "[pipeline]") {
	testutil::TempDir dir("damage");
	const auto config = toy_config(dir.file("out"));
	run_all(config);

	const std::string embeddings = dir.file("out/embeddings.csv");
	const std::string good = read_text_file(embeddings);
	std::ofstream(embeddings, std::ios::app) << "tampered\n";

	const auto embed_report = run_stage(Stage::embed, config);
	CHECK(!embed_report.skipped);
	CHECK(read_text_file(embeddings) == good);

	const auto graph_report = run_stage(Stage::graph, config);
	CHECK(graph_report.skipped);
}

TEST_CASE("a malformed manifest is reported, not ignored", "[pipeline]") {
	testutil::TempDir dir("mani");
	const auto config = toy_config(dir.file("out"));
	std::filesystem::create_directories(config.outdir);
	write_text_file(dir.file("out/manifest.json"), "{not json");
	CHECK_THROWS_AS(run_stage(Stage::ingest, config), ConfigError);
}

TEST_CASE("the command line driver maps failures to exit codes", "[cli]") {
	testutil::TempDir dir("cli");

	CHECK(run_cli("") == 2);
	CHECK(run_cli("run") == 2);
	CHECK(run_cli("run --config " + dir.file("nowhere.cfg")) == 2);

	write_text_file(dir.file("bad.cfg"), "bogus = 1\n");
	CHECK(run_cli("run --config " + dir.file("bad.cfg")) == 2);

	const std::string cfg = data_file("toy_run.cfg");
	CHECK(run_cli("extract --config " + cfg + " --set outdir=" + dir.file("fresh")) == 3);
	CHECK(run_cli("run --config " + cfg + " --set outdir=nope --set outdir" ) == 2);

	CHECK(run_cli("run --config " + cfg + " --set outdir=" + dir.file("toy")) == 0);
	CHECK(std::filesystem::exists(dir.file("toy/summary.json")));

	// a repeat invocation of a single stage is served from the manifest
	CHECK(run_cli("evaluate --config " + cfg + " --set outdir=" + dir.file("toy")) == 0);
}

TEST_CASE("a sweep writes one run per grid cell", "[cli]") {
	testutil::TempDir dir("sweep");
	const std::string cfg = data_file("toy_run.cfg");
	CHECK(run_cli("sweep --config " + cfg + " --set outdir=" + dir.file("grid") +
		      " --tau 0.0,0.5 --chunk 200") == 0);
	CHECK(std::filesystem::exists(dir.file("grid/sweep/tau0.0_c200/summary.json")));
	CHECK(std::filesystem::exists(dir.file("grid/sweep/tau0.5_c200/summary.json")));
}
