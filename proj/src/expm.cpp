// Copyright 2026 The dfs-cavity-sim Authors
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

#include "dfsim/expm.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/LU>

namespace dfsim {
namespace {

// Largest 1-norm for which the degree-m approximant reaches unit roundoff.
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kB3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kB5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kB7 = {17297280., 8648640., 1995840., 277200.,
                                       25200.,    1512.,    56.,      1.};
constexpr std::array<double, 10> kB9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                        30270240.,    2162160.,    110880.,     3960.,
                                        90.,          1.};
constexpr std::array<double, 14> kB13 = {
    64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
    129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
    1323241920.,        40840800.,          960960.,           16380.,
    182.,               1.};

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Low-degree approximant: U holds the odd part, V the even part.
template <std::size_t K>
void pade_low(const CMatrix& a, const std::array<double, K>& b, CMatrix& u, CMatrix& v) {
  const Index n = a.rows();
  const CMatrix a2 = a * a;
  CMatrix power = CMatrix::Identity(n, n);
  CMatrix odd = b[1] * power;
  CMatrix even = b[0] * power;
  for (std::size_t k = 2; k + 1 < K; k += 2) {
    power = power * a2;
    even += b[k] * power;
    odd += b[k + 1] * power;
  }
  u.noalias() = a * odd;
  v = even;
}

void pade13(const CMatrix& a, CMatrix& u, CMatrix& v) {
  const auto& b = kB13;
  const Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix tmp_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                        b[3] * a2 + b[1] * id;
  u.noalias() = a * tmp_u;
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm needs a square matrix");
  if (a.size() == 0) return a;
  const double norm = one_norm(a);
  CMatrix u(a.rows(), a.cols());
  CMatrix v(a.rows(), a.cols());
  int squarings = 0;
  if (norm <= kTheta[0]) {
    pade_low(a, kB3, u, v);
  } else if (norm <= kTheta[1]) {
    pade_low(a, kB5, u, v);
  } else if (norm <= kTheta[2]) {
    pade_low(a, kB7, u, v);
  } else if (norm <= kTheta[3]) {
    pade_low(a, kB9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    pade13(a * std::ldexp(1.0, -squarings), u, v);
  }
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

CMatrix conditional_propagator(const CMatrix& h, double t) {
  if (t < 0.0) throw std::invalid_argument("propagation time must be >= 0");
  return expm(Complex{0.0, -t} * h);
}

}  // namespace dfsim
