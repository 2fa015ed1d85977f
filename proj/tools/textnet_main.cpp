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

/*
 * Command line driver for the extraction pipeline.
 *
 *   textnet run --config run.cfg            full pipeline
 *   textnet <stage> --config run.cfg        one stage (ingest, vectorize,
 *                                           embed, graph, extract, merge,
 *                                           evaluate)
 *   textnet sweep --config run.cfg --tau 0.1,0.2 --chunk 200,400
 *
 * Exit codes: 0 success, 2 configuration or usage error, 3 missing upstream
 * artifact, 4 numerical failure, 1 anything else.
 */

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "textnet/error.hpp"
#include "textnet/io_util.hpp"
#include "textnet/pipeline.hpp"

namespace {

struct CliOptions {
	std::string config_path;
	std::vector<std::string> overrides;
	long long threads = -1;
	long long seed = -1;
	std::string tau_list;
	std::string chunk_list;
};

void add_common_options(CLI::App *cmd, CliOptions &options) {
	cmd->add_option("--config", options.config_path, "path to a key = value config file")->required();
	cmd->add_option("--set", options.overrides, "override a config key, as key=value (repeatable)");
	cmd->add_option("--threads", options.threads, "worker threads (0 = all cores)");
	cmd->add_option("--seed", options.seed, "override the random seed");
}

textnet::PipelineConfig load_config(const CliOptions &options) {
	textnet::PipelineConfig config = textnet::PipelineConfig::from_file(options.config_path);
	for (const auto &entry : options.overrides) {
		const auto eq = entry.find('=');
		if (eq == std::string::npos)
			throw textnet::ConfigError("--set expects key=value, got '" + entry + "'");
		config.set(textnet::trim(entry.substr(0, eq)), textnet::trim(entry.substr(eq + 1)), "--set " + entry);
	}
	if (options.threads >= 0)
		config.threads = static_cast<unsigned>(options.threads);
	if (options.seed >= 0)
		config.seed = static_cast<std::uint64_t>(options.seed);
	return config;
}

void print_report(const textnet::StageReport &report) {
	if (report.skipped)
		std::printf("stage %-9s cached (%s)\n", report.stage.c_str(), report.note.c_str());
	else
		std::printf("stage %-9s %s (%.2fs)\n", report.stage.c_str(), report.note.c_str(), report.seconds);
}

void run_full(const textnet::PipelineConfig &config) {
	const auto reports = textnet::run_all(config);
	for (const auto &report : reports)
		print_report(report);
	std::printf("run complete: %s\n", config.outdir.c_str());
}

std::vector<std::string> split_list(const std::string &text) {
	std::vector<std::string> out;
	std::string cur;
	for (char c : text) {
		if (c == ',') {
			out.push_back(textnet::trim(cur));
			cur.clear();
		} else {
			cur += c;
		}
	}
	out.push_back(textnet::trim(cur));
	return out;
}

void run_sweep(const CliOptions &options) {
	const textnet::PipelineConfig base = load_config(options);
	const std::vector<std::string> taus =
		options.tau_list.empty() ? std::vector<std::string>{textnet::format_double(base.tau)}
					 : split_list(options.tau_list);
	const std::vector<std::string> chunks =
		options.chunk_list.empty() ? std::vector<std::string>{std::to_string(base.chunk_size)}
					   : split_list(options.chunk_list);

	for (const auto &tau : taus) {
		for (const auto &chunk : chunks) {
			textnet::PipelineConfig config = base;
			config.set("tau", tau, "--tau " + tau);
			config.set("chunk_size", chunk, "--chunk " + chunk);
			config.outdir = (std::filesystem::path(base.outdir) / "sweep" /
					 ("tau" + tau + "_c" + chunk))
						.string();
			std::printf("sweep tau=%s chunk=%s -> %s\n", tau.c_str(), chunk.c_str(),
				    config.outdir.c_str());
			run_full(config);
		}
	}
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"text similarity community extraction pipeline"};
	app.require_subcommand(1);

	CliOptions options;

	CLI::App *run_cmd = app.add_subcommand("run", "run every stage in order");
	add_common_options(run_cmd, options);

	std::vector<CLI::App *> stage_cmds;
	for (const char *name : textnet::stage_names()) {
		CLI::App *cmd = app.add_subcommand(name, std::string("run the ") + name + " stage");
		add_common_options(cmd, options);
		stage_cmds.push_back(cmd);
	}

	CLI::App *sweep_cmd = app.add_subcommand("sweep", "run a tau / chunk size grid");
	add_common_options(sweep_cmd, options);
	sweep_cmd->add_option("--tau", options.tau_list, "comma separated tau values");
	sweep_cmd->add_option("--chunk", options.chunk_list, "comma separated chunk sizes");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		app.exit(e);
		return 2;
	}

	try {
		if (run_cmd->parsed()) {
			run_full(load_config(options));
		} else if (sweep_cmd->parsed()) {
			run_sweep(options);
		} else {
			for (std::size_t i = 0; i < stage_cmds.size(); ++i) {
				if (stage_cmds[i]->parsed()) {
					const auto report = textnet::run_stage(
						static_cast<textnet::Stage>(i), load_config(options));
					print_report(report);
					break;
				}
			}
		}
	} catch (const textnet::ConfigError &e) {
		std::fprintf(stderr, "config error: %s\n", e.what());
		return 2;
	} catch (const textnet::MissingArtifactError &e) {
		std::fprintf(stderr, "missing artifact: %s\n", e.what());
		return 3;
	} catch (const textnet::NumericalError &e) {
		std::fprintf(stderr, "numerical error: %s\n", e.what());
		return 4;
	} catch (const std::exception &e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return 1;
	}
	return 0;
}
