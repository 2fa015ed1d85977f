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
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "textnet/corpus.hpp"
#include "textnet/error.hpp"
#include "textnet/io_util.hpp"

namespace textnet {

/*
 * Stems in first-appearance order (scanning documents in corpus order and
 * tokens in document order), with the display form and document frequency of
 * each. Ordinals are dense and stable for a given corpus.
 */
struct Vocabulary {
	std::vector<std::string> stems;
	std::vector<std::string> display;
	std::vector<std::size_t> doc_frequency;
	std::unordered_map<std::string, std::size_t> ordinal;

	std::size_t size() const {
		return stems.size();
	}

	const std::size_t *find(const std::string &stem) const {
		auto it = ordinal.find(stem);
		return it == ordinal.end() ? nullptr : &it->second;
	}
};

/*
 * Sparse tf-idf matrix, terms by documents, stored document-major: one sorted
 * (term ordinal, weight) list per document. All stored weights are positive;
 * terms occurring in every document get idf 0 and are simply absent.
 */
struct TermDocMatrix {
	std::size_t term_count = 0;
	std::size_t doc_count = 0;
	std::vector<std::vector<std::pair<std::size_t, double>>> columns;
	Vocabulary vocabulary;
	std::vector<std::string> doc_ids;

	std::size_t nonzeros() const {
		std::size_t n = 0;
		for (const auto &col : columns)
			n += col.size();
		return n;
	}

	double at(std::size_t term, std::size_t doc) const {
		const auto &col = columns[doc];
		auto it = std::lower_bound(col.begin(), col.end(), term,
					   [](const auto &entry, std::size_t t) { return entry.first < t; });
		return (it != col.end() && it->first == term) ? it->second : 0.0;
	}
};

// Occurrences of term divided by document length, over stemmed tokens.
inline double term_frequency(const std::string &term, const Document &doc) {
	if (doc.tokens.empty())
		throw Error("empty document: " + doc.id);
	std::size_t count = 0;
	for (const auto &token : doc.tokens) {
		if (token == term)
			++count;
	}
	return static_cast<double>(count) / static_cast<double>(doc.tokens.size());
}

// log2 of (corpus size / number of documents containing term).
inline double inverse_document_frequency(const std::string &term, const std::vector<Document> &docs) {
	if (docs.empty())
		throw Error("empty corpus");
	std::size_t df = 0;
	for (const auto &doc : docs) {
		if (std::find(doc.tokens.begin(), doc.tokens.end(), term) != doc.tokens.end())
			++df;
	}
	if (df == 0)
		throw Error("term not in corpus: " + term);
	return std::log2(static_cast<double>(docs.size()) / static_cast<double>(df));
}

inline TermDocMatrix build_tfidf_matrix(const std::vector<Document> &docs,
					const SurfaceForms &surfaces = SurfaceForms(),
					std::size_t min_df = 1) {
	if (docs.empty())
		throw Error("empty corpus");

	std::vector<std::string> empty_ids;
	for (const auto &doc : docs) {
		if (doc.tokens.empty())
			empty_ids.push_back(doc.id);
	}
	if (!empty_ids.empty()) {
		std::string joined;
		for (const auto &id : empty_ids)
			joined += (joined.empty() ? "" : ", ") + id;
		throw Error("empty documents: " + joined);
	}

	TermDocMatrix m;
	m.doc_count = docs.size();
	m.doc_ids.reserve(docs.size());
	for (const auto &doc : docs)
		m.doc_ids.push_back(doc.id);

	// First-appearance ordinals and document frequencies in one scan.
	Vocabulary &vocab = m.vocabulary;
	std::vector<std::vector<std::pair<std::size_t, std::size_t>>> counts(docs.size());
	for (std::size_t d = 0; d < docs.size(); ++d) {
		std::unordered_map<std::size_t, std::size_t> local;
		for (const auto &token : docs[d].tokens) {
			auto it = vocab.ordinal.find(token);
			std::size_t ord;
			if (it == vocab.ordinal.end()) {
				ord = vocab.stems.size();
				vocab.ordinal.emplace(token, ord);
				vocab.stems.push_back(token);
				vocab.doc_frequency.push_back(0);
			} else {
				ord = it->second;
			}
			if (local[ord]++ == 0)
				++vocab.doc_frequency[ord];
		}
		counts[d].assign(local.begin(), local.end());
	}

	// Optional rare-term pruning; ordinals are re-densified in stable order.
	std::vector<std::size_t> remap(vocab.stems.size(), static_cast<std::size_t>(-1));
	if (min_df > 1) {
		Vocabulary pruned;
		for (std::size_t t = 0; t < vocab.stems.size(); ++t) {
			if (vocab.doc_frequency[t] < min_df)
				continue;
			remap[t] = pruned.stems.size();
			pruned.ordinal.emplace(vocab.stems[t], pruned.stems.size());
			pruned.stems.push_back(vocab.stems[t]);
			pruned.doc_frequency.push_back(vocab.doc_frequency[t]);
		}
		vocab = std::move(pruned);
	} else {
		for (std::size_t t = 0; t < remap.size(); ++t)
			remap[t] = t;
	}

	vocab.display.reserve(vocab.stems.size());
	for (const auto &stem : vocab.stems)
		vocab.display.push_back(surfaces.display(stem));

	m.term_count = vocab.size();
	m.columns.resize(docs.size());
	const double n_docs = static_cast<double>(docs.size());
	for (std::size_t d = 0; d < docs.size(); ++d) {
		const double len = static_cast<double>(docs[d].tokens.size());
		auto &col = m.columns[d];
		col.reserve(counts[d].size());
		for (const auto &[old_ord, count] : counts[d]) {
			const std::size_t ord = remap[old_ord];
			if (ord == static_cast<std::size_t>(-1))
				continue;
			const double idf = std::log2(n_docs / static_cast<double>(vocab.doc_frequency[ord]));
			const double weight = (static_cast<double>(count) / len) * idf;
			if (weight > 0.0)
				col.emplace_back(ord, weight);
		}
		std::sort(col.begin(), col.end());
	}
	return m;
}

// MatrixMarket coordinate format, 1-based indices, full double precision.
inline void write_matrix_market(const TermDocMatrix &m, const std::string &path) {
	std::ostringstream out;
	out << "%%MatrixMarket matrix coordinate real general\n";
	out << m.term_count << " " << m.doc_count << " " << m.nonzeros() << "\n";
	for (std::size_t d = 0; d < m.doc_count; ++d) {
		for (const auto &[term, weight] : m.columns[d])
			out << (term + 1) << " " << (d + 1) << " " << format_double(weight) << "\n";
	}
	write_text_file(path, out.str());
}

// Reads the subset of MatrixMarket written above (coordinate real general).
inline TermDocMatrix read_matrix_market(const std::string &path) {
	const auto lines = split_lines(read_text_file(path));
	std::size_t i = 0;
	if (i >= lines.size() || lines[i].rfind("%%MatrixMarket", 0) != 0)
		throw ConfigError(path + ": not a MatrixMarket file");
	++i;
	while (i < lines.size() && (lines[i].empty() || lines[i][0] == '%'))
		++i;
	if (i >= lines.size())
		throw ConfigError(path + ": missing size line");

	TermDocMatrix m;
	std::size_t nnz = 0;
	{
		std::istringstream header(lines[i]);
		if (!(header >> m.term_count >> m.doc_count >> nnz))
			throw ConfigError(path + ": bad size line: " + lines[i]);
	}
	++i;
	m.columns.resize(m.doc_count);
	std::size_t seen = 0;
	for (; i < lines.size(); ++i) {
		if (trim(lines[i]).empty())
			continue;
		std::istringstream entry(lines[i]);
		std::size_t term = 0, doc = 0;
		double weight = 0;
		if (!(entry >> term >> doc >> weight))
			throw ConfigError(path + ":" + std::to_string(i + 1) + ": bad entry: " + lines[i]);
		if (term < 1 || term > m.term_count || doc < 1 || doc > m.doc_count)
			throw ConfigError(path + ":" + std::to_string(i + 1) + ": entry out of bounds");
		m.columns[doc - 1].emplace_back(term - 1, weight);
		++seen;
	}
	if (seen != nnz)
		throw ConfigError(path + ": expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen));
	for (auto &col : m.columns)
		std::sort(col.begin(), col.end());
	return m;
}

/*
 * Dense human-readable view: one row per term sorted by display form, one
 * column per document, three decimals. Intended for small matrices.
 */
inline void write_dense_csv(const TermDocMatrix &m, const std::string &path) {
	std::vector<std::size_t> order(m.term_count);
	for (std::size_t t = 0; t < m.term_count; ++t)
		order[t] = t;
	std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		if (m.vocabulary.display[a] != m.vocabulary.display[b])
			return m.vocabulary.display[a] < m.vocabulary.display[b];
		return m.vocabulary.stems[a] < m.vocabulary.stems[b];
	});

	std::ostringstream out;
	out << "term";
	for (const auto &id : m.doc_ids)
		out << "," << csv_escape(id);
	out << "\n";
	for (std::size_t t : order) {
		out << csv_escape(m.vocabulary.display[t]);
		for (std::size_t d = 0; d < m.doc_count; ++d)
			out << "," << format_fixed(m.at(t, d), 3);
		out << "\n";
	}
	write_text_file(path, out.str());
}

} // namespace textnet
