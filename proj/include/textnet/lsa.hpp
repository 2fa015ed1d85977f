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

#include "textnet/error.hpp"
#include "textnet/io_util.hpp"
#include "textnet/linalg.hpp"
#include "textnet/rng.hpp"
#include "textnet/vectorize.hpp"

namespace textnet {

struct LsaFactors {
	std::size_t rank = 0;                // may be below the requested k for rank-deficient input
	std::vector<double> singular_values; // strictly positive, descending
	Matrix term_factors;                 // terms x rank, orthonormal columns
	Matrix doc_factors;                  // docs x rank, orthonormal columns
	std::size_t iterations = 0;          // subspace iterations spent
};

struct SvdOptions {
	std::size_t oversampling = 10;
	std::size_t min_iterations = 2;
	double tolerance = 1e-10;     // relative change of leading singular value estimates
	std::size_t max_iterations = 300;
	JacobiOptions jacobi;
};

inline Matrix sparse_times_dense(const TermDocMatrix &x, const Matrix &m) {
	if (m.rows() != x.doc_count)
		throw Error("matrix shape mismatch in sparse product");
	Matrix out(x.term_count, m.cols());
	for (std::size_t d = 0; d < x.doc_count; ++d) {
		const double *mrow = m.row_data(d);
		for (const auto &[term, weight] : x.columns[d]) {
			double *orow = out.row_data(term);
			for (std::size_t c = 0; c < m.cols(); ++c)
				orow[c] += weight * mrow[c];
		}
	}
	return out;
}

inline Matrix sparse_t_times_dense(const TermDocMatrix &x, const Matrix &m) {
	if (m.rows() != x.term_count)
		throw Error("matrix shape mismatch in sparse product");
	Matrix out(x.doc_count, m.cols());
	for (std::size_t d = 0; d < x.doc_count; ++d) {
		double *orow = out.row_data(d);
		for (const auto &[term, weight] : x.columns[d]) {
			const double *mrow = m.row_data(term);
			for (std::size_t c = 0; c < m.cols(); ++c)
				orow[c] += weight * mrow[c];
		}
	}
	return out;
}

inline double frobenius_norm_sq(const TermDocMatrix &x) {
	double sum = 0.0;
	for (const auto &col : x.columns)
		for (const auto &[term, weight] : col)
			sum += weight * weight;
	return sum;
}

/*
 * Randomized truncated SVD: Gaussian range sketch, subspace iteration until
 * the leading singular value estimates settle, then an exact Jacobi
 * factorization of the projected matrix. Seed fixes the sketch, so results
 * are bit-reproducible. Signs are canonicalized per component: the largest
 * magnitude entry of each term factor column (first index on ties) is made
 * positive.
 */
inline LsaFactors truncated_svd(const TermDocMatrix &x, std::size_t k, std::uint64_t seed,
				const SvdOptions &opts = {}) {
	const std::size_t m = x.term_count;
	const std::size_t n = x.doc_count;
	const std::size_t bound = std::min(m, n);
	if (k < 1 || k > bound)
		throw ConfigError("rank k out of range: k=" + std::to_string(k) +
				  ", valid range is 1.." + std::to_string(bound));
	if (x.nonzeros() == 0)
		throw Error("matrix has no nonzero entries");

	const std::size_t l = std::min(k + opts.oversampling, bound);

	Rng rng(seed);
	Matrix omega(n, l);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < l; ++j)
			omega(i, j) = rng.normal();

	Matrix q = orthonormal_basis(sparse_times_dense(x, omega));

	std::vector<double> prev;
	std::size_t iterations = 0;
	for (;;) {
		++iterations;
		Matrix qz = orthonormal_basis(sparse_t_times_dense(x, q));
		QrResult qr = householder_qr(sparse_times_dense(x, qz));
		q = std::move(qr.q);

		std::vector<double> est = jacobi_singular_values(qr.r, opts.jacobi);
		if (iterations >= opts.min_iterations && !prev.empty()) {
			const double scale = std::max(est[0], 1e-300);
			double delta = 0.0;
			for (std::size_t i = 0; i < std::min(k, est.size()); ++i)
				delta = std::max(delta, std::abs(est[i] - prev[i]));
			if (delta <= opts.tolerance * scale)
				break;
		}
		prev = std::move(est);
		if (iterations >= opts.max_iterations)
			throw NumericalError("truncated svd failed to converge after " +
					     std::to_string(iterations) + " iterations", iterations);
	}

	// b = q^T x, factored exactly: qr keeps the Jacobi kernel at l x l.
	Matrix b_t = sparse_t_times_dense(x, q);    // n x l, equals b^T
	QrResult bqr = householder_qr(b_t);         // b^T = qb * rb
	SvdResult small = jacobi_svd(bqr.r);        // rb = us * s * vs^T

	// b^T = (qb * us) s vs^T, so x ~ q * vs * s * (qb * us)^T.
	Matrix term_full = multiply(q, small.v);          // m x l
	Matrix doc_full = multiply(bqr.q, small.u);       // n x l

	const double sigma_max = small.singular_values.empty() ? 0.0 : small.singular_values[0];
	std::size_t kept = 0;
	while (kept < k && kept < small.singular_values.size() &&
	       small.singular_values[kept] > sigma_max * 1e-13 && small.singular_values[kept] > 0.0)
		++kept;
	if (kept == 0)
		throw Error("matrix has no nonzero entries");

	LsaFactors out;
	out.rank = kept;
	out.iterations = iterations;
	out.singular_values.assign(small.singular_values.begin(), small.singular_values.begin() + kept);
	out.term_factors = term_full.columns(0, kept);
	out.doc_factors = doc_full.columns(0, kept);

	for (std::size_t c = 0; c < kept; ++c) {
		std::size_t pivot = 0;
		double best = -1.0;
		for (std::size_t i = 0; i < m; ++i) {
			const double mag = std::abs(out.term_factors(i, c));
			if (mag > best) {
				best = mag;
				pivot = i;
			}
		}
		if (out.term_factors(pivot, c) < 0.0) {
			for (std::size_t i = 0; i < m; ++i)
				out.term_factors(i, c) = -out.term_factors(i, c);
			for (std::size_t i = 0; i < n; ++i)
				out.doc_factors(i, c) = -out.doc_factors(i, c);
		}
	}
	return out;
}

/*
 * Smallest rank whose cumulative squared singular values reach the requested
 * energy fraction, clamped by cap and by the length of the decay list.
 */
inline std::size_t choose_rank(const std::vector<double> &decay, double energy_fraction, std::size_t cap) {
	if (decay.empty())
		throw ConfigError("choose_rank needs a nonempty decay list");
	if (energy_fraction <= 0.0 || energy_fraction > 1.0)
		throw ConfigError("energy fraction must be in (0, 1]");
	if (cap < 1)
		throw ConfigError("rank cap must be at least 1");

	double total = 0.0;
	for (double s : decay)
		total += s * s;
	if (total == 0.0)
		return 1;

	double cum = 0.0;
	std::size_t k = decay.size();
	for (std::size_t i = 0; i < decay.size(); ++i) {
		cum += decay[i] * decay[i];
		if (cum >= energy_fraction * total) {
			k = i + 1;
			break;
		}
	}
	return std::min(k, cap);
}

// Row i is the embedding of document i; coordinates are not sigma-scaled.
inline const Matrix &doc_embeddings(const LsaFactors &factors) {
	return factors.doc_factors;
}

inline void write_embeddings_csv(const Matrix &embeddings, const std::vector<std::string> &doc_ids,
				 const std::string &path) {
	if (doc_ids.size() != embeddings.rows())
		throw Error("doc id count does not match embedding rows");
	std::ostringstream out;
	out << "doc_id";
	for (std::size_t c = 0; c < embeddings.cols(); ++c)
		out << ",dim" << c;
	out << "\n";
	for (std::size_t i = 0; i < embeddings.rows(); ++i) {
		out << csv_escape(doc_ids[i]);
		for (std::size_t c = 0; c < embeddings.cols(); ++c)
			out << "," << format_double(embeddings(i, c));
		out << "\n";
	}
	write_text_file(path, out.str());
}

inline std::pair<std::vector<std::string>, Matrix> read_embeddings_csv(const std::string &path) {
	const auto lines = split_lines(read_text_file(path));
	if (lines.empty())
		throw ConfigError(path + ": empty embeddings file");
	const auto header = split_csv_line(lines[0], path + ":1");
	if (header.empty() || header[0] != "doc_id")
		throw ConfigError(path + ": expected doc_id header");
	const std::size_t dims = header.size() - 1;

	std::vector<std::string> ids;
	std::vector<std::vector<double>> rows;
	for (std::size_t i = 1; i < lines.size(); ++i) {
		if (trim(lines[i]).empty())
			continue;
		const std::string where = path + ":" + std::to_string(i + 1);
		const auto fields = split_csv_line(lines[i], where);
		if (fields.size() != dims + 1)
			throw ConfigError(where + ": expected " + std::to_string(dims + 1) + " fields");
		ids.push_back(fields[0]);
		std::vector<double> row(dims);
		for (std::size_t c = 0; c < dims; ++c) {
			try {
				row[c] = std::stod(fields[c + 1]);
			} catch (const std::exception &) {
				throw ConfigError(where + ": bad number: " + fields[c + 1]);
			}
		}
		rows.push_back(std::move(row));
	}
	Matrix m(rows.size(), dims);
	for (std::size_t i = 0; i < rows.size(); ++i)
		for (std::size_t c = 0; c < dims; ++c)
			m(i, c) = rows[i][c];
	return {std::move(ids), std::move(m)};
}

inline void write_singular_values_csv(const std::vector<double> &decay, const std::string &path) {
	std::ostringstream out;
	out << "index,sigma\n";
	for (std::size_t i = 0; i < decay.size(); ++i)
		out << i << "," << format_double(decay[i]) << "\n";
	write_text_file(path, out.str());
}

} // namespace textnet
