// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "vqeac/errors.hpp"

namespace vqeac {

EriTensor::EriTensor(int n) : n_(n) {
  const std::size_t npair = std::size_t(n) * (n + 1) / 2;
  data_.assign(npair * (npair + 1) / 2, 0.0);
}

std::vector<double> EriTensor::dense() const {
  const std::size_t n = n_;
  std::vector<double> out(n * n * n * n);
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s)
          out[((p * n + q) * n + r) * n + s] = (*this)(p, q, r, s);
  return out;
}

EriTensor EriTensor::from_dense(int n, const std::vector<double>& dense) {
  EriTensor t(n);
  const std::size_t m = n;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s)
          if (pair(p, q) >= pair(r, s))
            t.set(p, q, r, s, dense[((p * m + q) * m + r) * m + s]);
  return t;
}

double EriTensor::symmetry_residual(int n, const std::vector<double>& d) {
  const std::size_t m = n;
  auto at = [&](int p, int q, int r, int s) {
    return d[((p * m + q) * m + r) * m + s];
  };
  double worst = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double ref = at(p, q, r, s);
          const double images[] = {at(q, p, r, s), at(p, q, s, r),
                                   at(q, p, s, r), at(r, s, p, q),
                                   at(s, r, p, q), at(r, s, q, p),
                                   at(s, r, q, p)};
          for (double x : images) worst = std::max(worst, std::abs(x - ref));
        }
  return worst;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool parse_double(std::string tok, double& out) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end && *end == '\0' && !tok.empty();
}

bool parse_int(const std::string& tok, long& out) {
  char* end = nullptr;
  out = std::strtol(tok.c_str(), &end, 10);
  return end && *end == '\0' && !tok.empty();
}

// Splits the namelist body into KEY -> list of integer values.
std::map<std::string, std::vector<long>> parse_namelist(const std::string& body,
                                                       int line) {
  std::map<std::string, std::vector<long>> out;
  std::string cleaned;
  for (char c : body) cleaned += (c == ',' ? ' ' : c);
  // Make "KEY=" and "KEY =" uniform by padding the equals sign.
  std::string padded;
  for (char c : cleaned) {
    if (c == '=') padded += " = ";
    else padded += c;
  }
  std::istringstream ss(padded);
  std::vector<std::string> toks;
  for (std::string t; ss >> t;) toks.push_back(t);
  std::string key;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i + 1 < toks.size() && toks[i + 1] == "=") {
      key = upper(toks[i]);
      out[key];
      ++i;
      continue;
    }
    if (key.empty())
      throw ParseError("unexpected token '" + toks[i] + "' in FCIDUMP header",
                       line);
    long v = 0;
    if (!parse_int(toks[i], v))
      throw ParseError("non-integer value '" + toks[i] + "' for key " + key,
                       line);
    out[key].push_back(v);
  }
  return out;
}

}  // namespace

IntegralSet parse_fcidump(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::string header;
  bool started = false, ended = false;
  int header_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("expected '&FCI' namelist header", lineno);
      }
      started = true;
      header_line = lineno;
      u = u.substr(pos + 4);
    }
    auto endpos = u.find("&END");
    if (endpos == std::string::npos) endpos = u.find('/');
    if (endpos != std::string::npos) {
      header += " " + u.substr(0, endpos);
      ended = true;
      break;
    }
    header += " " + u;
  }
  if (!started) throw ParseError("empty FCIDUMP: no '&FCI' header", lineno);
  if (!ended) throw ParseError("unterminated FCIDUMP header (missing &END)", lineno);

  auto keys = parse_namelist(header, header_line);
  auto scalar = [&](const char* key, bool required, long fallback) -> long {
    auto it = keys.find(key);
    if (it == keys.end() || it->second.empty()) {
      if (required)
        throw ParseError(std::string("missing required header key ") + key,
                         lineno);
      return fallback;
    }
    return it->second.front();
  };

  IntegralSet ints;
  ints.n_orb = int(scalar("NORB", true, 0));
  ints.n_elec = int(scalar("NELEC", true, 0));
  ints.ms2 = int(scalar("MS2", false, 0));
  ints.isym = int(scalar("ISYM", false, 1));
  if (ints.n_orb <= 0) throw ParseError("NORB must be positive", header_line);
  if (ints.n_elec < 0 || ints.n_elec > 2 * ints.n_orb)
    throw ParseError("NELEC out of range for NORB", header_line);
  if ((ints.n_elec + ints.ms2) % 2 != 0 || std::abs(ints.ms2) > ints.n_elec)
    throw ParseError("MS2 inconsistent with NELEC", header_line);
  if (auto it = keys.find("ORBSYM"); it != keys.end()) {
    for (long s : it->second) ints.orbsym.push_back(int(s));
    if (int(ints.orbsym.size()) != ints.n_orb)
      throw ParseError("ORBSYM length differs from NORB", header_line);
  } else {
    ints.orbsym.assign(ints.n_orb, 1);
  }

  const int n = ints.n_orb;
  ints.h = Mat::Zero(n, n);
  ints.v = EriTensor(n);
  std::vector<char> v_set(ints.v.packed_size(), 0);
  std::vector<char> h_set(std::size_t(n) * n, 0);
  bool core_set = false;
  constexpr double kDupTol = 1e-10;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks.size() != 5)
      throw ParseError("integral record needs 'value i j k l'", lineno);
    double value = 0.0;
    if (!parse_double(toks[0], value) || !std::isfinite(value))
      throw ParseError("bad integral value '" + toks[0] + "'", lineno);
    long idx[4];
    for (int k = 0; k < 4; ++k)
      if (!parse_int(toks[k + 1], idx[k]))
        throw ParseError("bad orbital index '" + toks[k + 1] + "'", lineno);
    for (long x : idx)
      if (x < 0 || x > n)
        throw BoundsError("line " + std::to_string(lineno) + ": orbital index " +
                          std::to_string(x) + " outside 1.." +
                          std::to_string(n));
    const int i = int(idx[0]) - 1, j = int(idx[1]) - 1, k = int(idx[2]) - 1,
              l = int(idx[3]) - 1;
    auto conflict = [&](double old) {
      if (std::abs(old - value) > kDupTol)
        throw ConsistencyError("line " + std::to_string(lineno) +
                               ": conflicting duplicate integral (" +
                               std::to_string(old) + " vs " +
                               std::to_string(value) + ")");
    };
    if (i < 0 && j < 0 && k < 0 && l < 0) {
      if (core_set) conflict(ints.core_energy);
      ints.core_energy = value;
      core_set = true;
    } else if (i >= 0 && j >= 0 && k < 0 && l < 0) {
      const std::size_t a = std::size_t(i) * n + j;
      if (h_set[a]) conflict(ints.h(i, j));
      ints.h(i, j) = ints.h(j, i) = value;
      h_set[a] = h_set[std::size_t(j) * n + i] = 1;
    } else if (i >= 0 && j < 0 && k < 0 && l < 0) {
      // Orbital energy record; not needed.
    } else if (i >= 0 && j >= 0 && k >= 0 && l >= 0) {
      const std::size_t a = EriTensor::index(i, j, k, l);
      if (v_set[a]) conflict(ints.v(i, j, k, l));
      ints.v.set(i, j, k, l, value);
      v_set[a] = 1;
    } else {
      throw ParseError("unrecognized index pattern", lineno);
    }
  }
  return ints;
}

IntegralSet load_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FCIDUMP '" + path + "'", 0);
  return parse_fcidump(in);
}

FixtureMeta load_fixture_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sidecar '" + path + "'", 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sidecar JSON: ") + e.what(), 0);
  }
  FixtureMeta m;
  m.name = j.value("name", "");
  m.basis = j.value("basis", "");
  m.hf_energy = j.at("hf_energy").get<double>();
  m.nuclear_repulsion = j.value("nuclear_repulsion", 0.0);
  if (j.contains("fci_energy") && j["fci_energy"].is_number())
    m.fci_energy = j["fci_energy"].get<double>();
  m.engine = j.value("engine", "");
  m.engine_version = j.value("engine_version", "");
  m.generator_version = j.value("generator_version", "");
  return m;
}

double determinant_energy(const IntegralSet& ints,
                          const std::vector<int>& alpha_occ,
                          const std::vector<int>& beta_occ) {
  const auto& v = ints.v;
  double e = ints.core_energy;
  for (int i : alpha_occ) e += ints.h(i, i);
  for (int i : beta_occ) e += ints.h(i, i);
  auto same_spin = [&](const std::vector<int>& occ) {
    double s = 0.0;
    for (int i : occ)
      for (int j : occ) s += v(i, i, j, j) - v(i, j, j, i);
    return 0.5 * s;
  };
  e += same_spin(alpha_occ) + same_spin(beta_occ);
  for (int i : alpha_occ)
    for (int j : beta_occ) e += v(i, i, j, j);
  return e;
}

double hf_energy(const IntegralSet& ints) {
  std::vector<int> a(ints.n_alpha()), b(ints.n_beta());
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  return determinant_energy(ints, a, b);
}

ActiveSpace ActiveSpace::from_counts(const IntegralSet& ints, int n_act_elec,
                                     int n_act_orb) {
  const int core_elec = ints.n_elec - n_act_elec;
  if (core_elec < 0 || core_elec % 2 != 0)
    throw DomainError("active electron count leaves an odd or negative core");
  const int n_inact = core_elec / 2;
  if (n_act_orb < 0 || n_inact + n_act_orb > ints.n_orb)
    throw DomainError("active orbital count exceeds available orbitals");
  ActiveSpace cas;
  for (int p = 0; p < ints.n_orb; ++p) {
    if (p < n_inact) cas.inactive.push_back(p);
    else if (p < n_inact + n_act_orb) cas.active.push_back(p);
    else cas.virtual_.push_back(p);
  }
  cas.n_act_elec = n_act_elec;
  cas.validate(ints);
  return cas;
}

ActiveSpace ActiveSpace::full(const IntegralSet& ints) {
  return from_counts(ints, ints.n_elec, ints.n_orb);
}

void ActiveSpace::validate(const IntegralSet& ints) const {
  std::vector<int> seen(ints.n_orb, 0);
  for (const auto* set : {&inactive, &active, &virtual_})
    for (int p : *set) {
      if (p < 0 || p >= ints.n_orb)
        throw DomainError("active-space orbital index out of range");
      if (seen[p]++) throw DomainError("orbital listed in two subspaces");
    }
  if (std::count(seen.begin(), seen.end(), 1) != ints.n_orb)
    throw DomainError("active space does not cover every orbital");
  if (n_act_elec != ints.n_elec - 2 * int(inactive.size()))
    throw DomainError("n_act_elec inconsistent with inactive orbital count");
  if (n_act_elec < 0 || n_act_elec > 2 * int(active.size()))
    throw DomainError("n_act_elec outside [0, 2*|active|]");
  const int na = ints.n_alpha() - int(inactive.size());
  const int nb = ints.n_beta() - int(inactive.size());
  if (na < 0 || nb < 0 || na > n_act() || nb > n_act())
    throw DomainError("spin populations do not fit the active space");
}

std::vector<int> ActiveSpace::classes(int n_orb) const {
  std::vector<int> c(n_orb, -1);
  for (int p : inactive) c[p] = 0;
  for (int p : active) c[p] = 1;
  for (int p : virtual_) c[p] = 2;
  return c;
}

EmbeddedHamiltonian embed_active_space(const IntegralSet& ints,
                                       const ActiveSpace& cas) {
  cas.validate(ints);
  const auto& v = ints.v;
  EmbeddedHamiltonian emb;
  emb.n_act = cas.n_act();
  emb.n_alpha = ints.n_alpha() - int(cas.inactive.size());
  emb.n_beta = ints.n_beta() - int(cas.inactive.size());
  double e = ints.core_energy;
  for (int i : cas.inactive) e += 2.0 * ints.h(i, i);
  for (int i : cas.inactive)
    for (int j : cas.inactive) e += 2.0 * v(i, i, j, j) - v(i, j, j, i);
  emb.e_core = e;
  const int na = emb.n_act;
  emb.h_eff = Mat::Zero(na, na);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b) {
      const int u = cas.active[a], w = cas.active[b];
      double x = ints.h(u, w);
      for (int i : cas.inactive) x += 2.0 * v(u, w, i, i) - v(u, i, i, w);
      emb.h_eff(a, b) = x;
    }
  emb.v_act = EriTensor(na);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b <= a; ++b)
      for (int c = 0; c < na; ++c)
        for (int d = 0; d <= c; ++d)
          emb.v_act.set(a, b, c, d,
                        v(cas.active[a], cas.active[b], cas.active[c],
                          cas.active[d]));
  return emb;
}

std::vector<double> transform_eri_dense(int n, const std::vector<double>& v,
                                        const Mat& u) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;
  const Eigen::Index n3 = Eigen::Index(n) * n * n;
  std::vector<double> cur = v, next(v.size());
  const Mat ut = u.transpose();
  // Transform the leading index, then rotate it to the back; four passes
  // restore the original index order.
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::Map<const RowMat> in(cur.data(), n, n3);
    Eigen::Map<RowMat> out(next.data(), n3, n);
    out.noalias() = (ut * in).transpose();
    std::swap(cur, next);
  }
  return cur;
}

IntegralSet transform_orbitals(const IntegralSet& ints, const Mat& u) {
  IntegralSet out = ints;
  out.h = u.transpose() * ints.h * u;
  out.h = 0.5 * (out.h + out.h.transpose()).eval();
  out.v = EriTensor::from_dense(
      ints.n_orb, transform_eri_dense(ints.n_orb, ints.v.dense(), u));
  return out;
}

IntegralSet rotate_orbitals(const IntegralSet& ints, const Mat& kappa) {
  if (kappa.rows() != ints.n_orb || kappa.cols() != ints.n_orb)
    throw DomainError("kappa dimension differs from orbital count");
  if ((kappa + kappa.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("kappa is not antisymmetric");
  return transform_orbitals(ints, antisymmetric_exp(kappa));
}

}  // namespace vqeac
