// Copyright 2026 The countgof Authors
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

#pragma once

namespace countgof {

/// I(a, theta) = integral_0^1 u^a exp(theta u) du for a >= 0.
///
/// theta >= 0: sum_k theta^k / (k! (a + k + 1)).
/// theta < 0: the Kummer-transformed form
///   exp(theta) / (a + 1) * sum_k (-theta)^k / ((a + 2)(a + 3)...(a + k + 1)),
/// whose terms are all positive. Both series use compensated summation.
/// Throws DomainError for a < 0 or |theta| > 700.
double incomplete_I(double a, double theta);

/// exp(-lambda) I(a, lambda) = integral_0^1 u^a exp(lambda (u - 1)) du for
/// lambda >= 0, with the a = 0 case in closed form.
double scaled_incomplete_I(double a, double lambda);

}  // namespace countgof
