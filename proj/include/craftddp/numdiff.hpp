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

#ifndef CRAFTDDP_NUMDIFF_HPP
#define CRAFTDDP_NUMDIFF_HPP

#include <Eigen/Dense>

#include <functional>

namespace craftddp {

using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline constexpr double kJacobianRelStep = 1e-6;
inline constexpr double kHessianRelStep = 1e-4;

// Column j is (fn(z + h_j e_j) - fn(z - h_j e_j)) / (2 h_j) with
// h_j = rel_step * max(1, |z_j|).
Eigen::MatrixXd central_jacobian(const VectorFunction& fn,
                                 const Eigen::VectorXd& z, double rel_step);

}  // namespace craftddp

#endif  // CRAFTDDP_NUMDIFF_HPP
