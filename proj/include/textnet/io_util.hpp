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

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "textnet/error.hpp"

namespace textnet {

inline std::string read_text_file(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw ConfigError("cannot open file: " + path);
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

inline void write_text_file(const std::string &path, const std::string &content) {
	const auto parent = std::filesystem::path(path).parent_path();
	if (!parent.empty())
		std::filesystem::create_directories(parent);
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		throw Error("cannot write file: " + path);
	out << content;
	if (!out)
		throw Error("short write: " + path);
}

// Splits text into lines; accepts \n and \r\n, drops a trailing empty line.
inline std::vector<std::string> split_lines(const std::string &text) {
	std::vector<std::string> lines;
	std::string cur;
	for (char c : text) {
		if (c == '\n') {
			if (!cur.empty() && cur.back() == '\r')
				cur.pop_back();
			lines.push_back(cur);
			cur.clear();
		} else {
			cur.push_back(c);
		}
	}
	if (!cur.empty())
		lines.push_back(cur);
	return lines;
}

inline std::string trim(const std::string &s) {
	std::size_t b = 0;
	std::size_t e = s.size();
	while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
		++b;
	while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
		--e;
	return s.substr(b, e - b);
}

inline std::string to_lower(std::string s) {
	for (char &c : s)
		c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	return s;
}

/*
 * RFC-4180 style field split: commas separate, double quotes group, a doubled
 * quote inside a quoted field is a literal quote. context names the source in
 * error messages.
 */
inline std::vector<std::string> split_csv_line(const std::string &line, const std::string &context) {
	std::vector<std::string> fields;
	std::string cur;
	bool quoted = false;
	for (std::size_t i = 0; i < line.size(); ++i) {
		const char c = line[i];
		if (quoted) {
			if (c == '"') {
				if (i + 1 < line.size() && line[i + 1] == '"') {
					cur.push_back('"');
					++i;
				} else {
					quoted = false;
				}
			} else {
				cur.push_back(c);
			}
		} else if (c == '"' && cur.empty()) {
			quoted = true;
		} else if (c == ',') {
			fields.push_back(cur);
			cur.clear();
		} else {
			cur.push_back(c);
		}
	}
	if (quoted)
		throw ConfigError(context + ": unterminated quote");
	fields.push_back(cur);
	return fields;
}

inline std::string csv_escape(const std::string &field) {
	if (field.find_first_of(",\"\n\r") == std::string::npos)
		return field;
	std::string out = "\"";
	for (char c : field) {
		if (c == '"')
			out += "\"\"";
		else
			out.push_back(c);
	}
	out.push_back('"');
	return out;
}

// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double value) {
	char buf[64];
	std::snprintf(buf, sizeof(buf), "%.17g", value);
	return buf;
}

inline std::string format_fixed(double value, int decimals) {
	char buf[64];
	std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
	return buf;
}

inline std::uint64_t fnv1a64(std::string_view data) {
	std::uint64_t hash = 0xcbf29ce484222325ULL;
	for (unsigned char c : data) {
		hash ^= c;
		hash *= 0x100000001b3ULL;
	}
	return hash;
}

inline std::string fnv1a64_hex(std::string_view data) {
	char buf[17];
	std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
	return buf;
}

inline std::string hash_file(const std::string &path) {
	return fnv1a64_hex(read_text_file(path));
}

} // namespace textnet
