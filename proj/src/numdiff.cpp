/*
 Copyright 2026 The craftddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "craftddp/numdiff.hpp"

#include <algorithm>
#include <cmath>

namespace craftddp {

Eigen::MatrixXd central_jacobian(const VectorFunction& fn,
                                 const Eigen::VectorXd& z, double rel_step) {
  Eigen::MatrixXd jac;
  Eigen::VectorXd zp = z;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double h = rel_step * std::max(1.0, std::abs(z(j)));
    zp(j) = z(j) + h;
    const Eigen::VectorXd fp = fn(zp);
    zp(j) = z(j) - h;
    const Eigen::VectorXd fm = fn(zp);
    zp(j) = z(j);
    if (jac.size() == 0) jac.resize(fp.size(), z.size());
    // Use the realized step so the quotient matches the evaluated points.
    jac.col(j) = (fp - fm) / ((z(j) + h) - (z(j) - h));
  }
  return jac;
}

}  // namespace craftddp
