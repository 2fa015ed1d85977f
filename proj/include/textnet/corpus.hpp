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
#include <map>
#include <regex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "textnet/error.hpp"
#include "textnet/io_util.hpp"
#include "textnet/parallel.hpp"
#include "textnet/porter.hpp"

namespace textnet {

struct Document {
	std::string id;
	std::string text;
	std::vector<std::string> tokens;
	std::vector<std::string> tags;
};

using StopwordSet = std::unordered_set<std::string>;

inline bool is_alpha_word(const std::string &w) {
	if (w.empty())
		return false;
	for (char c : w) {
		if (c < 'a' || c > 'z')
			return false;
	}
	return true;
}

/*
 * Whole-word misspelling corrections. Entries are lowercased on load; chains
 * (a -> b while b -> c) are resolved to their endpoint so a single pass over
 * the text suffices. Self-maps and cycles are rejected.
 */
class SpellingDictionary {
public:
	SpellingDictionary() = default;

	static SpellingDictionary from_pairs(const std::vector<std::pair<std::string, std::string>> &pairs) {
		SpellingDictionary dict;
		for (const auto &[wrong_raw, right_raw] : pairs) {
			const std::string wrong = to_lower(trim(wrong_raw));
			const std::string right = to_lower(trim(right_raw));
			if (!is_alpha_word(wrong) || !is_alpha_word(right))
				throw ConfigError("dictionary entries must be alphabetic words: '" + wrong_raw + "' -> '" + right_raw + "'");
			if (wrong == right)
				throw ConfigError("dictionary entry maps to itself: " + wrong);
			if (dict.m_entries.count(wrong))
				throw ConfigError("duplicate dictionary entry: " + wrong);
			dict.m_entries.emplace(wrong, right);
		}
		dict.resolve_chains();
		return dict;
	}

	static SpellingDictionary from_csv(const std::string &path) {
		const auto lines = split_lines(read_text_file(path));
		std::vector<std::pair<std::string, std::string>> pairs;
		for (std::size_t i = 0; i < lines.size(); ++i) {
			const std::string line = trim(lines[i]);
			if (line.empty())
				continue;
			const std::string where = path + ":" + std::to_string(i + 1);
			const auto fields = split_csv_line(line, where);
			if (fields.size() != 2)
				throw ConfigError(where + ": expected 2 fields, got " + std::to_string(fields.size()));
			if (i == 0 && to_lower(trim(fields[0])) == "wrong" && to_lower(trim(fields[1])) == "right")
				continue;
			pairs.emplace_back(fields[0], fields[1]);
		}
		try {
			return from_pairs(pairs);
		} catch (const ConfigError &e) {
			throw ConfigError(path + ": " + e.what());
		}
	}

	const std::string *lookup(const std::string &word) const {
		auto it = m_entries.find(word);
		return it == m_entries.end() ? nullptr : &it->second;
	}

	std::size_t size() const {
		return m_entries.size();
	}

private:
	void resolve_chains() {
		for (auto &[key, value] : m_entries) {
			std::unordered_set<std::string> seen{key};
			std::string cur = value;
			while (true) {
				auto it = m_entries.find(cur);
				if (it == m_entries.end())
					break;
				if (seen.count(cur))
					throw ConfigError("dictionary contains a cycle through: " + cur);
				seen.insert(cur);
				cur = it->second;
			}
			value = cur;
		}
	}

	std::unordered_map<std::string, std::string> m_entries;
};

/*
 * Regex rules that collapse concrete dates, doses and clock times into the
 * literal tokens "date", "dose" and "time". Rules run against lowercased
 * text; every built-in pattern requires a digit, which makes replacement
 * idempotent (a second pass can never fire after digits are removed).
 */
class NormalizationPatterns {
public:
	struct Rule {
		std::string label;
		std::string source;
		std::regex pattern;
	};

	NormalizationPatterns() = default;

	static NormalizationPatterns from_list(const std::vector<std::pair<std::string, std::string>> &rules) {
		NormalizationPatterns p;
		for (const auto &[label, source] : rules)
			p.add_rule(label, source);
		return p;
	}

	static const NormalizationPatterns &defaults() {
		static const NormalizationPatterns instance = make_defaults();
		return instance;
	}

	static NormalizationPatterns from_json_file(const std::string &path) {
		nlohmann::json doc;
		try {
			doc = nlohmann::json::parse(read_text_file(path));
		} catch (const nlohmann::json::parse_error &e) {
			throw ConfigError(path + ": malformed pattern file: " + std::string(e.what()));
		}
		if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
			throw ConfigError(path + ": pattern file needs a top-level \"rules\" array");
		NormalizationPatterns p;
		for (const auto &entry : doc["rules"]) {
			if (!entry.is_object() || !entry.contains("label") || !entry.contains("pattern"))
				throw ConfigError(path + ": each rule needs \"label\" and \"pattern\"");
			p.add_rule(entry["label"].get<std::string>(), entry["pattern"].get<std::string>());
		}
		return p;
	}

	/*
	 * Replaces every match with its rule label. Overlaps resolve to the
	 * longest match at the earliest start; rule order breaks remaining ties.
	 */
	std::string apply(const std::string &text) const {
		struct Span {
			std::size_t start;
			std::size_t length;
			std::size_t rule;
		};
		std::vector<Span> spans;
		for (std::size_t r = 0; r < m_rules.size(); ++r) {
			auto begin = std::sregex_iterator(text.begin(), text.end(), m_rules[r].pattern);
			for (auto it = begin; it != std::sregex_iterator(); ++it) {
				if (it->length(0) > 0)
					spans.push_back({static_cast<std::size_t>(it->position(0)),
							 static_cast<std::size_t>(it->length(0)), r});
			}
		}
		std::sort(spans.begin(), spans.end(), [](const Span &a, const Span &b) {
			if (a.start != b.start)
				return a.start < b.start;
			if (a.length != b.length)
				return a.length > b.length;
			return a.rule < b.rule;
		});

		std::string out;
		out.reserve(text.size());
		std::size_t cursor = 0;
		for (const Span &span : spans) {
			if (span.start < cursor)
				continue;
			out.append(text, cursor, span.start - cursor);
			out.append(m_rules[span.rule].label);
			cursor = span.start + span.length;
		}
		out.append(text, cursor, text.size() - cursor);
		return out;
	}

	const std::vector<Rule> &rules() const {
		return m_rules;
	}

private:
	void add_rule(const std::string &label, const std::string &source) {
		if (!is_alpha_word(label))
			throw ConfigError("pattern label must be a lowercase word: '" + label + "'");
		try {
			m_rules.push_back({label, source, std::regex(source, std::regex::ECMAScript | std::regex::optimize)});
		} catch (const std::regex_error &e) {
			throw ConfigError("bad pattern for label '" + label + "': " + e.what());
		}
	}

	static NormalizationPatterns make_defaults() {
		static const char *months =
			"january|february|march|april|may|june|july|august|september|october|november|december|"
			"jan|feb|mar|apr|jun|jul|aug|sept|sep|oct|nov|dec";
		std::vector<std::pair<std::string, std::string>> rules;
		rules.emplace_back("date", std::string("(?:") + months +
			")\\.?\\s+\\d{1,2}(?:st|nd|rd|th)?(?:\\s*,\\s*\\d{2,4}|\\s+\\d{4})?");
		rules.emplace_back("date", std::string("\\d{1,2}(?:st|nd|rd|th)?\\s+(?:of\\s+)?(?:") + months +
			")\\b\\.?(?:\\s*,?\\s*\\d{4})?");
		rules.emplace_back("date", "\\d{4}-\\d{1,2}-\\d{1,2}");
		rules.emplace_back("date", "\\d{1,2}[/-]\\d{1,2}(?:[/-]\\d{2,4})?");
		rules.emplace_back("time", "\\d{1,2}:\\d{2}(?::\\d{2})?(?:\\s*(?:am\\b|pm\\b|a\\.m\\.|p\\.m\\.))?");
		rules.emplace_back("time", "\\d{1,2}\\s*(?:am\\b|pm\\b|a\\.m\\.|p\\.m\\.|o'?clock)");
		rules.emplace_back("dose",
			"\\d+(?:\\.\\d+)?\\s*"
			"(?:micrograms?|milligrams?|kilograms?|grams?|millilit(?:er|re)s?|lit(?:er|re)s?|"
			"mcg|mgs|mg|gm|kg|ml|cc|iu|meq|mmol|units?|tablets?|tabs?|capsules?|caps?|drops?|puffs?|mc|g|l|u)"
			"(?:\\s*/\\s*(?:mcg|mgs|mg|kg|ml|gm|hr|hour|day|dose|min|g|l|h|d))?\\b");
		return from_list(rules);
	}

	std::vector<Rule> m_rules;
};

/*
 * Full text normalization: lowercase, whole-word spelling correction,
 * date/dose/time replacement, digit removal, then removal of everything that
 * is not a lowercase letter, whitespace or period. Idempotent by
 * construction: a second application returns its input unchanged.
 */
inline std::string normalize_text(const std::string &raw, const SpellingDictionary &dict,
				  const NormalizationPatterns &patterns = NormalizationPatterns::defaults()) {
	const std::string lower = to_lower(raw);

	std::string corrected;
	corrected.reserve(lower.size());
	std::size_t i = 0;
	while (i < lower.size()) {
		const char c = lower[i];
		if (c >= 'a' && c <= 'z') {
			std::size_t j = i;
			while (j < lower.size() && lower[j] >= 'a' && lower[j] <= 'z')
				++j;
			const std::string word = lower.substr(i, j - i);
			const std::string *right = dict.lookup(word);
			corrected += right ? *right : word;
			i = j;
		} else {
			corrected.push_back(c);
			++i;
		}
	}

	const std::string replaced = patterns.apply(corrected);

	std::string out;
	out.reserve(replaced.size());
	for (char c : replaced) {
		if (c >= '0' && c <= '9')
			continue;
		if ((c >= 'a' && c <= 'z') || c == '.' || std::isspace(static_cast<unsigned char>(c)))
			out.push_back(c);
	}
	return out;
}

// Shortest observed pre-stem surface per stem; ties break lexicographically.
class SurfaceForms {
public:
	void record(const std::string &stem, const std::string &surface) {
		auto it = m_best.find(stem);
		if (it == m_best.end()) {
			m_best.emplace(stem, surface);
			return;
		}
		std::string &cur = it->second;
		if (surface.size() < cur.size() || (surface.size() == cur.size() && surface < cur))
			cur = surface;
	}

	std::string display(const std::string &stem) const {
		auto it = m_best.find(stem);
		return it == m_best.end() ? stem : it->second;
	}

	void merge(const SurfaceForms &other) {
		for (const auto &[stem, surface] : other.m_best)
			record(stem, surface);
	}

	std::map<std::string, std::string> items() const {
		return {m_best.begin(), m_best.end()};
	}

	static SurfaceForms from_items(const std::map<std::string, std::string> &items) {
		SurfaceForms s;
		for (const auto &[stem, surface] : items)
			s.record(stem, surface);
		return s;
	}

private:
	std::unordered_map<std::string, std::string> m_best;
};

/*
 * Splits normalized text on whitespace, drops periods from tokens, removes
 * stopwords (before stemming, so "the" is compared literally) and stems what
 * remains. Empty results are dropped.
 */
inline std::vector<std::string> tokenize_and_stem(const std::string &normalized, const StopwordSet &stopwords,
						  SurfaceForms *surfaces = nullptr) {
	std::vector<std::string> tokens;
	std::string word;
	auto flush = [&]() {
		if (word.empty())
			return;
		std::string surface;
		surface.reserve(word.size());
		for (char c : word) {
			if (c != '.')
				surface.push_back(c);
		}
		word.clear();
		if (surface.empty() || stopwords.count(surface))
			return;
		std::string stem = porter_stem(surface);
		if (surfaces)
			surfaces->record(stem, surface);
		tokens.push_back(std::move(stem));
	};
	for (char c : normalized) {
		if (std::isspace(static_cast<unsigned char>(c)))
			flush();
		else
			word.push_back(c);
	}
	flush();
	return tokens;
}

inline StopwordSet default_stopwords() {
	return {"the", "and", "a", "an", "of", "to"};
}

inline StopwordSet load_stopwords(const std::string &path) {
	StopwordSet set;
	for (const std::string &line : split_lines(read_text_file(path))) {
		const std::string word = to_lower(trim(line));
		if (!word.empty() && word[0] != '#')
			set.insert(word);
	}
	return set;
}

enum class CorpusFormat { auto_detect, jsonl, csv };

inline std::vector<Document> load_corpus(const std::string &path, CorpusFormat format = CorpusFormat::auto_detect) {
	if (format == CorpusFormat::auto_detect) {
		const std::string ext = std::filesystem::path(path).extension().string();
		if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json")
			format = CorpusFormat::jsonl;
		else if (ext == ".csv")
			format = CorpusFormat::csv;
		else
			throw ConfigError("cannot infer corpus format from extension: " + path);
	}

	const auto lines = split_lines(read_text_file(path));
	std::vector<Document> docs;
	std::unordered_set<std::string> ids;

	auto add = [&](Document doc, std::size_t line_no) {
		if (!ids.insert(doc.id).second)
			throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate document id: " + doc.id);
		docs.push_back(std::move(doc));
	};

	if (format == CorpusFormat::jsonl) {
		for (std::size_t i = 0; i < lines.size(); ++i) {
			if (trim(lines[i]).empty())
				continue;
			const std::string where = path + ":" + std::to_string(i + 1);
			nlohmann::json rec;
			try {
				rec = nlohmann::json::parse(lines[i]);
			} catch (const nlohmann::json::parse_error &e) {
				throw ConfigError(where + ": malformed record: " + std::string(e.what()));
			}
			if (!rec.is_object())
				throw ConfigError(where + ": record is not an object");
			if (!rec.contains("id"))
				throw ConfigError(where + ": missing \"id\"");
			if (!rec.contains("text") || !rec["text"].is_string())
				throw ConfigError(where + ": missing or non-string \"text\"");
			Document doc;
			if (rec["id"].is_string())
				doc.id = rec["id"].get<std::string>();
			else if (rec["id"].is_number_integer())
				doc.id = std::to_string(rec["id"].get<long long>());
			else
				throw ConfigError(where + ": \"id\" must be a string or integer");
			doc.text = rec["text"].get<std::string>();
			if (rec.contains("tags")) {
				if (!rec["tags"].is_array())
					throw ConfigError(where + ": \"tags\" must be an array of strings");
				for (const auto &tag : rec["tags"]) {
					if (!tag.is_string())
						throw ConfigError(where + ": \"tags\" must be an array of strings");
					doc.tags.push_back(tag.get<std::string>());
				}
			}
			add(std::move(doc), i + 1);
		}
	} else {
		for (std::size_t i = 0; i < lines.size(); ++i) {
			if (trim(lines[i]).empty())
				continue;
			const std::string where = path + ":" + std::to_string(i + 1);
			const auto fields = split_csv_line(lines[i], where);
			if (i == 0 && fields.size() == 2 && to_lower(trim(fields[0])) == "id" && to_lower(trim(fields[1])) == "text")
				continue;
			if (fields.size() != 2)
				throw ConfigError(where + ": expected 2 fields, got " + std::to_string(fields.size()));
			add({fields[0], fields[1], {}, {}}, i + 1);
		}
	}
	return docs;
}

// Tokenizes every document in place and returns the merged surface registry.
inline SurfaceForms normalize_corpus(std::vector<Document> &docs, const SpellingDictionary &dict,
				     const StopwordSet &stopwords,
				     const NormalizationPatterns &patterns = NormalizationPatterns::defaults(),
				     unsigned threads = 1) {
	std::vector<SurfaceForms> partial(docs.size());
	parallel_for(docs.size(), threads, [&](std::size_t begin, std::size_t end) {
		for (std::size_t d = begin; d < end; ++d)
			docs[d].tokens = tokenize_and_stem(normalize_text(docs[d].text, dict, patterns), stopwords, &partial[d]);
	});
	SurfaceForms merged;
	for (const SurfaceForms &p : partial)
		merged.merge(p);
	return merged;
}

} // namespace textnet
