// Copyright 2026 The msmsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msmsq/expm.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "msmsq/errors.hpp"

namespace msmsq {
namespace {

double norm1(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients b_0..b_m for m = 3, 5, 7, 9, 13.
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

template <std::size_t K>
CMatrix pade_low(const CMatrix& a, const std::array<double, K>& b) {
  const Eigen::Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  // Even/odd split: U = A * sum b_{2k+1} A^{2k}, V = sum b_{2k} A^{2k}.
  CMatrix power = id;
  CMatrix u_acc = CMatrix::Zero(n, n);
  CMatrix v_acc = CMatrix::Zero(n, n);
  for (std::size_t k = 0; 2 * k < K; ++k) {
    v_acc += b[2 * k] * power;
    if (2 * k + 1 < K) u_acc += b[2 * k + 1] * power;
    if (2 * k + 2 < K) power = power * a2;
  }
  const CMatrix u = a * u_acc;
  return (v_acc - u).partialPivLu().solve(v_acc + u);
}

CMatrix pade13(const CMatrix& a) {
  const auto& b = kB13;
  const Eigen::Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  if (!a.allFinite()) throw NumericalIntegrityError("expm: input matrix has non-finite entries");
  if (a.size() == 0) return a;
  const double nrm = norm1(a);
  if (nrm <= 1.495585217958292e-2) return pade_low(a, kB3);
  if (nrm <= 2.539398330063230e-1) return pade_low(a, kB5);
  if (nrm <= 9.504178996162932e-1) return pade_low(a, kB7);
  if (nrm <= 2.097847961257068e0) return pade_low(a, kB9);
  constexpr double theta13 = 5.371920351148152;
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
  if (s > 64) {
    std::ostringstream msg;
    msg << "expm: 1-norm " << nrm << " needs " << s << " squarings";
    throw NumericalIntegrityError(msg.str());
  }
  CMatrix r = pade13(a / std::ldexp(1.0, s));
  for (int k = 0; k < s; ++k) r = r * r;
  if (!r.allFinite()) {
    std::ostringstream msg;
    msg << "expm: result overflowed (input 1-norm " << nrm << ")";
    throw NumericalIntegrityError(msg.str());
  }
  return r;
}

}  // namespace msmsq
