// Copyright 2026 The hetsup Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetsup/math.h"

#include <algorithm>

namespace hetsup {

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> Softmax(std::span<const double> scores) {
  std::vector<double> p(scores.size());
  if (scores.empty()) return p;
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - max);
    sum += p[i];
  }
  for (double &x : p) x /= sum;
  return p;
}

std::vector<double> Matrix::MultiplyVector(std::span<const double> x) const {
  std::vector<double> y(rows_);
  for (size_t r = 0; r < rows_; ++r) y[r] = Dot(Row(r), x);
  return y;
}

std::vector<double> Matrix::TransposeMultiplyVector(
    std::span<const double> y) const {
  std::vector<double> x(cols_, 0.0);
  for (size_t r = 0; r < rows_; ++r) Axpy(y[r], Row(r), x);
  return x;
}

bool Matrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace hetsup
