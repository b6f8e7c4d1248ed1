// Copyright 2026 The Holant Toolkit Authors
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

#include "holant/scalar.hpp"

#include <functional>

#include "holant/errors.hpp"

namespace holant {

namespace {

mpq_class makeQ(const std::string& num, const std::string& den) {
  mpz_class n, d;
  if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) {
    throw ParseError("bad rational component '" + num + "/" + den + "'");
  }
  if (d == 0) throw ParseError("zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace

GaussianRational GaussianRational::fromParts(const std::string& num, const std::string& den,
                                             const std::string& numI, const std::string& denI) {
  return GaussianRational(makeQ(num, den), makeQ(numI, denI));
}

GaussianRational GaussianRational::parseRational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return GaussianRational(makeQ(s, "1"));
  return GaussianRational(makeQ(s.substr(0, slash), s.substr(slash + 1)));
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.isZero()) throw std::domain_error("division by zero in Q(i)");
  mpq_class n = o.norm2();
  GaussianRational t = *this * o.conj();
  re_ = t.re_ / n;
  im_ = t.im_ / n;
  return *this;
}

void GaussianRational::addProduct(const GaussianRational& a, const GaussianRational& b) {
  if (a.isZero() || b.isZero()) return;
  if (sgn(a.im_) == 0 && sgn(b.im_) == 0) {
    re_ += a.re_ * b.re_;
    return;
  }
  re_ += a.re_ * b.re_ - a.im_ * b.im_;
  im_ += a.re_ * b.im_ + a.im_ * b.re_;
}

std::string GaussianRational::toString() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "i";
  std::string s = re_.get_str();
  if (sgn(im_) > 0) s += "+";
  return s + im_.get_str() + "i";
}

std::size_t GaussianRational::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str()) * 1000003u ^ h(im_.get_str());
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& x) { return os << x.toString(); }

}  // namespace holant
