#include "lcu/integrals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lcu {

void validate(const IntegralSet& iset, double tol) {
  if (iset.n_spatial <= 0 || iset.n_spin_orbitals != 2 * iset.n_spatial)
    throw ValidationError("integral set: n_spin_orbitals must be 2*n_spatial and positive");
  const int n = iset.n_spatial;
  if (iset.T.rows != n || iset.T.cols != n || iset.V.n != n)
    throw ValidationError("integral set: dimension mismatch");
  for (double x : iset.T.a)
    if (!std::isfinite(x)) throw ValidationError("integral set: non-finite T entry");
  for (double x : iset.V.v)
    if (!std::isfinite(x)) throw ValidationError("integral set: non-finite V entry");
  if (!std::isfinite(iset.core_energy)) throw ValidationError("integral set: non-finite core energy");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < p; ++q)
      if (std::fabs(iset.T(p, q) - iset.T(q, p)) > tol)
        throw ValidationError("integral set: T not symmetric");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = iset.V.at(p, q, r, s);
          auto chk = [&](double w) {
            if (std::fabs(v - w) > tol) throw ValidationError("integral set: V symmetry violated");
          };
          chk(iset.V.at(q, p, r, s));
          chk(iset.V.at(p, q, s, r));
          chk(iset.V.at(r, s, p, q));
        }
}

void validate(const RawIntegrals& raw, double tol) {
  IntegralSet tmp;
  tmp.n_spatial = raw.n_spatial;
  tmp.n_spin_orbitals = 2 * raw.n_spatial;
  tmp.T = raw.h1;
  tmp.V = raw.h2;
  tmp.core_energy = raw.core_energy;
  validate(tmp, tol);
}

namespace {

struct Key4 {
  int p, q, r, s;
  auto operator<=>(const Key4&) const = default;
};

// Canonical representative under the 8-fold group: descending within each
// pair, then the lexicographically larger pair first.
Key4 canonical4(int p, int q, int r, int s) {
  if (p < q) std::swap(p, q);
  if (r < s) std::swap(r, s);
  if (std::pair{p, q} < std::pair{r, s}) {
    std::swap(p, r);
    std::swap(q, s);
  }
  return {p, q, r, s};
}

void fill_images(Tensor4& t, int p, int q, int r, int s, double value) {
  const std::array<std::array<int, 4>, 8> images = {{{p, q, r, s},
                                                     {q, p, r, s},
                                                     {p, q, s, r},
                                                     {q, p, s, r},
                                                     {r, s, p, q},
                                                     {s, r, p, q},
                                                     {r, s, q, p},
                                                     {s, r, q, p}}};
  for (const auto& im : images) t.at(im[0], im[1], im[2], im[3]) = value;
}

}  // namespace

RawIntegrals load_fcidump(std::istream& in) {
  std::string line;
  std::string header;
  bool header_done = false;
  int line_no = 0;

  // Header: starts with &FCI, ends with a bare "/" or "&END" token.
  while (std::getline(in, line)) {
    ++line_no;
    header += " " + line;
    auto has = [&](const char* tok) { return header.find(tok) != std::string::npos; };
    if (line_no == 1 && header.find("&FCI") == std::string::npos)
      throw ValidationError("fcidump line 1: header must start with &FCI");
    if (has("/") || has("&END")) {
      header_done = true;
      break;
    }
    if (line_no > 100) break;
  }
  if (!header_done) throw ValidationError("fcidump: unterminated header (missing / or &END)");

  int norb = -1;
  {
    auto pos = header.find("NORB");
    if (pos == std::string::npos) throw ValidationError("fcidump: header missing NORB");
    pos = header.find('=', pos);
    if (pos == std::string::npos) throw ValidationError("fcidump: malformed NORB field");
    norb = std::atoi(header.c_str() + pos + 1);
    if (norb <= 0) throw ValidationError("fcidump: NORB must be positive");
  }

  RawIntegrals raw;
  raw.n_spatial = norb;
  raw.h1 = Matrix(norb, norb);
  raw.h2 = Tensor4(norb);

  std::map<Key4, double> seen;  // canonical key -> value, for duplicate checks
  const double dup_tol = 1e-12;

  while (std::getline(in, line)) {
    ++line_no;
    // strip comments/blank lines
    std::istringstream ls(line);
    std::string vtok;
    if (!(ls >> vtok)) continue;
    char* end = nullptr;
    double value = std::strtod(vtok.c_str(), &end);
    if (end == vtok.c_str() || *end != '\0')
      throw ValidationError("fcidump line " + std::to_string(line_no) + ": non-numeric value '" + vtok + "'");
    long i, j, k, l;
    if (!(ls >> i >> j >> k >> l))
      throw ValidationError("fcidump line " + std::to_string(line_no) + ": expected four indices");
    for (long idx : {i, j, k, l})
      if (idx < 0 || idx > norb)
        throw ValidationError("fcidump line " + std::to_string(line_no) + ": index out of range [0, NORB]");

    auto record = [&](Key4 key) {
      auto it = seen.find(key);
      if (it != seen.end() && std::fabs(it->second - value) > dup_tol)
        throw ValidationError("fcidump line " + std::to_string(line_no) +
                              ": duplicate entry with conflicting value");
      seen[key] = value;
    };

    if (i == 0 && j == 0 && k == 0 && l == 0) {
      raw.core_energy = value;
    } else if (k == 0 && l == 0 && i > 0 && j > 0) {
      record(Key4{static_cast<int>(std::max(i, j)), static_cast<int>(std::min(i, j)), 0, 0});
      raw.h1(i - 1, j - 1) = value;
      raw.h1(j - 1, i - 1) = value;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      record(canonical4(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k),
                        static_cast<int>(l)));
      fill_images(raw.h2, static_cast<int>(i) - 1, static_cast<int>(j) - 1,
                  static_cast<int>(k) - 1, static_cast<int>(l) - 1, value);
    } else {
      throw ValidationError("fcidump line " + std::to_string(line_no) + ": unsupported index pattern");
    }
  }
  return raw;
}

RawIntegrals load_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_fcidump(in);
}

void write_fcidump(std::ostream& out, const RawIntegrals& raw) {
  const int n = raw.n_spatial;
  out << "&FCI NORB=" << n << ",NELEC=0,MS2=0,\n/\n";
  char buf[64];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out << buf << " " << i << " " << j << " " << k << " " << l << "\n";
  };
  // two-body representatives: p>=q, r>=s, (p,q) >= (r,s), ascending order
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (std::pair{p, q} < std::pair{r, s}) continue;
          double v = raw.h2.at(p, q, r, s);
          if (v != 0.0) emit(v, p + 1, q + 1, r + 1, s + 1);
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      double v = raw.h1(p, q);
      if (v != 0.0) emit(v, p + 1, q + 1, 0, 0);
    }
  if (raw.core_energy != 0.0) emit(raw.core_energy, 0, 0, 0, 0);
}

std::string fcidump_to_string(const RawIntegrals& raw) {
  std::ostringstream os;
  write_fcidump(os, raw);
  return os.str();
}

IntegralSet to_chemist_form(const RawIntegrals& raw) {
  validate(raw, 1e-10);
  const int n = raw.n_spatial;
  IntegralSet iset;
  iset.n_spatial = n;
  iset.n_spin_orbitals = 2 * n;
  iset.core_energy = raw.core_energy;
  iset.T = Matrix(n, n);
  iset.V = Tensor4(n);
  for (size_t idx = 0; idx < raw.h2.v.size(); ++idx) iset.V.v[idx] = raw.h2.v[idx] * 0.5;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double shift = 0.0;
      for (int r = 0; r < n; ++r) shift += raw.h2.at(p, r, r, q);
      iset.T(p, q) = raw.h1(p, q) - 0.5 * shift;
    }
  return iset;
}

Matrix matricize(const IntegralSet& iset) {
  validate(iset);
  const int n = iset.n_spatial;
  Matrix w(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) w(p * n + q, r * n + s) = iset.V.at(p, q, r, s);
  return w;
}

IntegralSet random_integrals(uint64_t seed, int n_spatial, int rank) {
  if (rank < 0 || rank > n_spatial * n_spatial)
    throw std::invalid_argument("random_integrals: rank must be in [0, n_spatial^2]");
  DetRng rng(seed);
  const int n = n_spatial;
  IntegralSet iset;
  iset.n_spatial = n;
  iset.n_spin_orbitals = 2 * n;
  iset.T = Matrix(n, n);
  iset.V = Tensor4(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      double t = rng.uniform(-1.0, 1.0);
      iset.T(p, q) = t;
      iset.T(q, p) = t;
    }
  for (int l = 0; l < rank; ++l) {
    double c = rng.uniform(0.25, 1.25);
    Matrix g(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q <= p; ++q) {
        double x = rng.uniform(-1.0, 1.0);
        g(p, q) = x;
        g(q, p) = x;
      }
    // accumulate once per orbit so the 8-fold symmetry holds bit-exactly
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q)
        for (int r = p; r < n; ++r)
          for (int s = r; s < n; ++s) {
            if (std::pair{p, q} > std::pair{r, s}) continue;
            double add = c * g(p, q) * g(r, s);
            double v = iset.V.at(p, q, r, s) + add;
            fill_images(iset.V, p, q, r, s, v);
          }
  }
  iset.core_energy = rng.uniform(-1.0, 1.0);
  return iset;
}

}  // namespace lcu
