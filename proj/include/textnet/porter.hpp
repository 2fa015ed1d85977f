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

#include <cstring>
#include <string>

namespace textnet {

/*
 * Classic Porter suffix stripping (the original 1980 rule set, not the
 * "porter2"/snowball revision). Input must already be lowercase a-z; words of
 * one or two letters pass through unchanged. Within each step the longest
 * matching suffix is selected first and only then is its condition tested; a
 * failed condition ends the step, it does not fall through to shorter rules.
 */
namespace porter_detail {

inline bool is_consonant(const std::string &w, std::size_t i) {
	const char c = w[i];
	if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u')
		return false;
	if (c == 'y')
		return i == 0 ? true : !is_consonant(w, i - 1);
	return true;
}

// Number of vowel-consonant transitions in w[0, len): the m of [C](VC)^m[V].
inline int measure(const std::string &w, std::size_t len) {
	int m = 0;
	std::size_t i = 0;
	while (i < len && is_consonant(w, i))
		++i;
	while (i < len) {
		while (i < len && !is_consonant(w, i))
			++i;
		if (i >= len)
			break;
		while (i < len && is_consonant(w, i))
			++i;
		++m;
	}
	return m;
}

inline bool has_vowel(const std::string &w, std::size_t len) {
	for (std::size_t i = 0; i < len; ++i) {
		if (!is_consonant(w, i))
			return true;
	}
	return false;
}

inline bool ends_double_consonant(const std::string &w, std::size_t len) {
	if (len < 2)
		return false;
	if (w[len - 1] != w[len - 2])
		return false;
	return is_consonant(w, len - 1);
}

// Consonant-vowel-consonant tail where the final consonant is not w, x or y.
inline bool ends_cvc(const std::string &w, std::size_t len) {
	if (len < 3)
		return false;
	if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1))
		return false;
	const char last = w[len - 1];
	return last != 'w' && last != 'x' && last != 'y';
}

inline bool ends_with(const std::string &w, const char *suffix) {
	const std::size_t n = std::strlen(suffix);
	if (w.size() < n)
		return false;
	return w.compare(w.size() - n, n, suffix) == 0;
}

struct Rule {
	const char *suffix;
	const char *replacement;
};

/*
 * Applies the first (hence longest, tables are ordered by suffix length)
 * matching rule whose stem measure exceeds min_measure. Returns true once a
 * suffix matched, whether or not the condition allowed the rewrite.
 */
template <std::size_t N>
bool apply_rules(std::string &w, const Rule (&rules)[N], int min_measure) {
	for (const Rule &rule : rules) {
		if (!ends_with(w, rule.suffix))
			continue;
		const std::size_t stem = w.size() - std::strlen(rule.suffix);
		if (measure(w, stem) > min_measure)
			w = w.substr(0, stem) + rule.replacement;
		return true;
	}
	return false;
}

inline void step_1a(std::string &w) {
	if (ends_with(w, "sses")) {
		w.resize(w.size() - 2);
	} else if (ends_with(w, "ies")) {
		w.resize(w.size() - 2);
	} else if (ends_with(w, "ss")) {
		// keep
	} else if (ends_with(w, "s")) {
		w.resize(w.size() - 1);
	}
}

inline void step_1b(std::string &w) {
	if (ends_with(w, "eed")) {
		if (measure(w, w.size() - 3) > 0)
			w.resize(w.size() - 1);
		return;
	}
	bool stripped = false;
	if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
		w.resize(w.size() - 2);
		stripped = true;
	} else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
		w.resize(w.size() - 3);
		stripped = true;
	}
	if (!stripped)
		return;
	if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
		w.push_back('e');
	} else if (ends_double_consonant(w, w.size())) {
		const char last = w.back();
		if (last != 'l' && last != 's' && last != 'z')
			w.resize(w.size() - 1);
	} else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
		w.push_back('e');
	}
}

inline void step_1c(std::string &w) {
	if (ends_with(w, "y") && has_vowel(w, w.size() - 1))
		w.back() = 'i';
}

inline void step_2(std::string &w) {
	static const Rule rules[] = {
		{"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"},
		{"fulness", "ful"}, {"ousness", "ous"}, {"tional", "tion"},
		{"biliti", "ble"},  {"entli", "ent"},   {"ousli", "ous"},
		{"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
		{"iviti", "ive"},   {"enci", "ence"},   {"anci", "ance"},
		{"izer", "ize"},    {"abli", "able"},   {"alli", "al"},
		{"ator", "ate"},    {"eli", "e"},
	};
	apply_rules(w, rules, 0);
}

inline void step_3(std::string &w) {
	static const Rule rules[] = {
		{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
		{"ical", "ic"},  {"ness", ""},  {"ful", ""},
	};
	apply_rules(w, rules, 0);
}

inline void step_4(std::string &w) {
	static const Rule rules[] = {
		{"ement", ""}, {"ance", ""}, {"ence", ""}, {"able", ""},
		{"ible", ""},  {"ment", ""}, {"ant", ""},  {"ent", ""},
		{"ion", ""},   {"ism", ""},  {"ate", ""},  {"iti", ""},
		{"ous", ""},   {"ive", ""},  {"ize", ""},  {"al", ""},
		{"er", ""},    {"ic", ""},   {"ou", ""},
	};
	for (const Rule &rule : rules) {
		if (!ends_with(w, rule.suffix))
			continue;
		const std::size_t stem = w.size() - std::strlen(rule.suffix);
		bool ok = measure(w, stem) > 1;
		if (ok && std::strcmp(rule.suffix, "ion") == 0)
			ok = stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't');
		if (ok)
			w.resize(stem);
		return;
	}
}

inline void step_5a(std::string &w) {
	if (!ends_with(w, "e"))
		return;
	const std::size_t stem = w.size() - 1;
	const int m = measure(w, stem);
	if (m > 1 || (m == 1 && !ends_cvc(w, stem)))
		w.resize(stem);
}

inline void step_5b(std::string &w) {
	if (w.back() == 'l' && ends_double_consonant(w, w.size()) && measure(w, w.size()) > 1)
		w.resize(w.size() - 1);
}

} // namespace porter_detail

inline std::string porter_stem(std::string word) {
	if (word.size() <= 2)
		return word;
	porter_detail::step_1a(word);
	porter_detail::step_1b(word);
	porter_detail::step_1c(word);
	porter_detail::step_2(word);
	porter_detail::step_3(word);
	porter_detail::step_4(word);
	porter_detail::step_5a(word);
	porter_detail::step_5b(word);
	return word;
}

} // namespace textnet
