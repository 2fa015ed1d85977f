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
#include <cstddef>
#include <numeric>
#include <vector>

#include "textnet/error.hpp"

namespace textnet {

class Matrix {
public:
	Matrix() = default;

	Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
		: m_rows(rows), m_cols(cols), m_data(rows * cols, fill) {}

	static Matrix identity(std::size_t n) {
		Matrix m(n, n);
		for (std::size_t i = 0; i < n; ++i)
			m(i, i) = 1.0;
		return m;
	}

	static Matrix from_rows(const std::vector<std::vector<double>> &rows) {
		if (rows.empty())
			return Matrix();
		Matrix m(rows.size(), rows[0].size());
		for (std::size_t i = 0; i < rows.size(); ++i) {
			if (rows[i].size() != m.m_cols)
				throw Error("ragged rows in matrix literal");
			for (std::size_t j = 0; j < m.m_cols; ++j)
				m(i, j) = rows[i][j];
		}
		return m;
	}

	double &operator()(std::size_t i, std::size_t j) {
		return m_data[i * m_cols + j];
	}

	double operator()(std::size_t i, std::size_t j) const {
		return m_data[i * m_cols + j];
	}

	std::size_t rows() const {
		return m_rows;
	}

	std::size_t cols() const {
		return m_cols;
	}

	const double *row_data(std::size_t i) const {
		return m_data.data() + i * m_cols;
	}

	double *row_data(std::size_t i) {
		return m_data.data() + i * m_cols;
	}

	const std::vector<double> &data() const {
		return m_data;
	}

	Matrix columns(std::size_t first, std::size_t count) const {
		Matrix out(m_rows, count);
		for (std::size_t i = 0; i < m_rows; ++i)
			for (std::size_t j = 0; j < count; ++j)
				out(i, j) = (*this)(i, first + j);
		return out;
	}

private:
	std::size_t m_rows = 0;
	std::size_t m_cols = 0;
	std::vector<double> m_data;
};

inline Matrix multiply(const Matrix &a, const Matrix &b) {
	if (a.cols() != b.rows())
		throw Error("matrix shape mismatch in multiply");
	Matrix out(a.rows(), b.cols());
	for (std::size_t i = 0; i < a.rows(); ++i) {
		const double *arow = a.row_data(i);
		double *orow = out.row_data(i);
		for (std::size_t k = 0; k < a.cols(); ++k) {
			const double aik = arow[k];
			if (aik == 0.0)
				continue;
			const double *brow = b.row_data(k);
			for (std::size_t j = 0; j < b.cols(); ++j)
				orow[j] += aik * brow[j];
		}
	}
	return out;
}

inline Matrix transpose(const Matrix &a) {
	Matrix out(a.cols(), a.rows());
	for (std::size_t i = 0; i < a.rows(); ++i)
		for (std::size_t j = 0; j < a.cols(); ++j)
			out(j, i) = a(i, j);
	return out;
}

inline double frobenius_norm(const Matrix &a) {
	double sum = 0.0;
	for (double v : a.data())
		sum += v * v;
	return std::sqrt(sum);
}

struct QrResult {
	Matrix q; // m x n, orthonormal columns
	Matrix r; // n x n, upper triangular
};

/*
 * Thin Householder QR for m >= n. Q has exactly orthonormal columns even when
 * A is rank deficient (a zero pivot column contributes an identity step, so Q
 * keeps the corresponding unit vector).
 */
inline QrResult householder_qr(const Matrix &a) {
	const std::size_t m = a.rows();
	const std::size_t n = a.cols();
	if (m < n)
		throw Error("householder_qr needs rows >= cols");

	Matrix r = a;
	std::vector<std::vector<double>> reflectors(n);

	for (std::size_t k = 0; k < n; ++k) {
		double norm2 = 0.0;
		for (std::size_t i = k; i < m; ++i)
			norm2 += r(i, k) * r(i, k);
		const double norm = std::sqrt(norm2);
		if (norm == 0.0)
			continue; // zero pivot column: no reflection needed

		const double alpha = r(k, k) >= 0.0 ? -norm : norm;
		std::vector<double> v(m - k);
		for (std::size_t i = k; i < m; ++i)
			v[i - k] = r(i, k);
		v[0] -= alpha;
		double vnorm2 = 0.0;
		for (double x : v)
			vnorm2 += x * x;
		if (vnorm2 == 0.0)
			continue;

		for (std::size_t j = k; j < n; ++j) {
			double dot = 0.0;
			for (std::size_t i = k; i < m; ++i)
				dot += v[i - k] * r(i, j);
			const double scale = 2.0 * dot / vnorm2;
			for (std::size_t i = k; i < m; ++i)
				r(i, j) -= scale * v[i - k];
		}
		reflectors[k] = std::move(v);
	}

	// Q = H_0 ... H_{n-1} restricted to the first n identity columns.
	Matrix q(m, n);
	for (std::size_t j = 0; j < n; ++j)
		q(j, j) = 1.0;
	for (std::size_t k = n; k-- > 0;) {
		const auto &v = reflectors[k];
		if (v.empty())
			continue;
		double vnorm2 = 0.0;
		for (double x : v)
			vnorm2 += x * x;
		for (std::size_t j = 0; j < n; ++j) {
			double dot = 0.0;
			for (std::size_t i = k; i < m; ++i)
				dot += v[i - k] * q(i, j);
			const double scale = 2.0 * dot / vnorm2;
			for (std::size_t i = k; i < m; ++i)
				q(i, j) -= scale * v[i - k];
		}
	}

	Matrix r_small(n, n);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i; j < n; ++j)
			r_small(i, j) = r(i, j);
	return {std::move(q), std::move(r_small)};
}

inline Matrix orthonormal_basis(const Matrix &a) {
	return householder_qr(a).q;
}

struct SvdResult {
	Matrix u;
	std::vector<double> singular_values; // descending, zeros possible at tail
	Matrix v;                            // a = u * diag(s) * v^T
};

struct JacobiOptions {
	double tolerance = 1e-14;
	std::size_t max_sweeps = 100;
};

namespace linalg_detail {

/*
 * One-sided Jacobi on b (rows >= cols): rotates column pairs until they are
 * mutually orthogonal. accumulate_v controls whether the rotations are also
 * applied to an identity to recover V.
 */
inline void jacobi_orthogonalize(Matrix &b, Matrix *v, const JacobiOptions &opts) {
	const std::size_t n = b.cols();
	const std::size_t m = b.rows();
	if (n < 2)
		return;

	for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
		// Columns whose mass sits at the roundoff floor (left over from
		// annihilating linearly dependent columns) are finished; rotating
		// them only chases noise and keeps the sweep from converging.
		double max_norm_sq = 0.0;
		for (std::size_t j = 0; j < n; ++j) {
			double sum = 0.0;
			for (std::size_t i = 0; i < m; ++i)
				sum += b(i, j) * b(i, j);
			max_norm_sq = std::max(max_norm_sq, sum);
		}
		const double negligible = max_norm_sq * 1e-28;

		bool rotated = false;
		for (std::size_t p = 0; p + 1 < n; ++p) {
			for (std::size_t q = p + 1; q < n; ++q) {
				double alpha = 0.0, beta = 0.0, gamma = 0.0;
				for (std::size_t i = 0; i < m; ++i) {
					const double bp = b(i, p);
					const double bq = b(i, q);
					alpha += bp * bp;
					beta += bq * bq;
					gamma += bp * bq;
				}
				if (alpha <= negligible || beta <= negligible)
					continue;
				if (std::abs(gamma) <= opts.tolerance * std::sqrt(alpha * beta))
					continue;

				const double zeta = (beta - alpha) / (2.0 * gamma);
				const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
				const double c = 1.0 / std::sqrt(1.0 + t * t);
				const double s = c * t;
				for (std::size_t i = 0; i < m; ++i) {
					const double bp = b(i, p);
					const double bq = b(i, q);
					b(i, p) = c * bp - s * bq;
					b(i, q) = s * bp + c * bq;
				}
				if (v) {
					for (std::size_t i = 0; i < n; ++i) {
						const double vp = (*v)(i, p);
						const double vq = (*v)(i, q);
						(*v)(i, p) = c * vp - s * vq;
						(*v)(i, q) = s * vp + c * vq;
					}
				}
				rotated = true;
			}
		}
		if (!rotated)
			return;
	}
	throw NumericalError("jacobi svd failed to converge after " + std::to_string(opts.max_sweeps) + " sweeps",
			     opts.max_sweeps);
}

} // namespace linalg_detail

/*
 * Full thin SVD by one-sided Jacobi. Slow but simple and accurate; used as
 * the reference factorization and as the final small-matrix kernel of the
 * randomized method. Columns of u beyond the numerical rank are zero.
 */
inline SvdResult jacobi_svd(const Matrix &a, const JacobiOptions &opts = {}) {
	const bool flipped = a.rows() < a.cols();
	Matrix b = flipped ? transpose(a) : a;
	const std::size_t m = b.rows();
	const std::size_t n = b.cols();

	Matrix v = Matrix::identity(n);
	linalg_detail::jacobi_orthogonalize(b, &v, opts);

	std::vector<double> norms(n, 0.0);
	for (std::size_t j = 0; j < n; ++j) {
		double sum = 0.0;
		for (std::size_t i = 0; i < m; ++i)
			sum += b(i, j) * b(i, j);
		norms[j] = std::sqrt(sum);
	}

	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), std::size_t(0));
	std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

	const double sigma_max = norms.empty() ? 0.0 : norms[order[0]];
	const double drop = sigma_max * 1e-300; // only exact zeros stay unnormalized

	SvdResult out;
	out.u = Matrix(m, n);
	out.v = Matrix(n, n);
	out.singular_values.resize(n);
	for (std::size_t jj = 0; jj < n; ++jj) {
		const std::size_t j = order[jj];
		out.singular_values[jj] = norms[j];
		if (norms[j] > drop && norms[j] > 0.0) {
			for (std::size_t i = 0; i < m; ++i)
				out.u(i, jj) = b(i, j) / norms[j];
		}
		for (std::size_t i = 0; i < n; ++i)
			out.v(i, jj) = v(i, j);
	}

	if (flipped)
		std::swap(out.u, out.v);
	return out;
}

// Singular values only; skips accumulating V.
inline std::vector<double> jacobi_singular_values(const Matrix &a, const JacobiOptions &opts = {}) {
	const bool flipped = a.rows() < a.cols();
	Matrix b = flipped ? transpose(a) : a;
	linalg_detail::jacobi_orthogonalize(b, nullptr, opts);

	std::vector<double> norms(b.cols(), 0.0);
	for (std::size_t j = 0; j < b.cols(); ++j) {
		double sum = 0.0;
		for (std::size_t i = 0; i < b.rows(); ++i)
			sum += b(i, j) * b(i, j);
		norms[j] = std::sqrt(sum);
	}
	std::sort(norms.begin(), norms.end(), std::greater<double>());
	return norms;
}

} // namespace textnet
