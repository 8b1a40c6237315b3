#include "blissthc/fcidump.hpp"

#include "blissthc/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

namespace blissthc::tensor_core {

namespace {

constexpr double kConflictTol = 1e-8;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::toupper(c)); });
  return s;
}

struct Header {
  std::optional<long> norb;
  std::optional<long> nelec;
};

// Picks NORB / NELEC out of comma/space separated KEY=VALUE tokens.
void scan_header_text(const std::string& text, Header& hdr, std::size_t line) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream ss(t);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = upper(tok.substr(0, eq));
    std::string val = tok.substr(eq + 1);
    if (val.empty()) ss >> val;  // "NORB= 4"
    if (key != "NORB" && key != "NELEC") continue;
    try {
      std::size_t used = 0;
      const long v = std::stol(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      (key == "NORB" ? hdr.norb : hdr.nelec) = v;
    } catch (const std::exception&) {
      throw ParseError(line, "bad integer for " + key + ": '" + val + "'");
    }
  }
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

double parse_value(std::string tok, std::size_t line) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad numeric value '" + tok + "'");
  }
}

long parse_index(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad index '" + tok + "'");
  }
}

class Assembler {
 public:
  explicit Assembler(std::size_t n)
      : n_(n), h_(Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n))), h_set_(n * n, 0), g_(n),
        g_set_(n * n * n * n, 0) {}

  void one_body(std::size_t p, std::size_t q, double v, std::size_t line) {
    for (auto [a, b] : {std::pair{p, q}, std::pair{q, p}}) {
      auto& flag = h_set_[a * n_ + b];
      double& slot = h_(Eigen::Index(a), Eigen::Index(b));
      if (flag && std::abs(slot - v) > kConflictTol) {
        throw IntegrityError("line " + std::to_string(line) + ": one-body entry (" + std::to_string(a + 1) +
                             "," + std::to_string(b + 1) + ") conflicts with an earlier value");
      }
      slot = v;
      flag = 1;
    }
  }

  void two_body(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v, std::size_t line) {
    const std::array<std::array<std::size_t, 4>, 8> images{{{p, q, r, s},
                                                            {q, p, r, s},
                                                            {p, q, s, r},
                                                            {q, p, s, r},
                                                            {r, s, p, q},
                                                            {s, r, p, q},
                                                            {r, s, q, p},
                                                            {s, r, q, p}}};
    for (const auto& im : images) {
      const std::size_t idx = ((im[0] * n_ + im[1]) * n_ + im[2]) * n_ + im[3];
      double& slot = g_.data()[idx];
      if (g_set_[idx] && std::abs(slot - v) > kConflictTol) {
        throw IntegrityError("line " + std::to_string(line) + ": two-body entry (" +
                             std::to_string(im[0] + 1) + "," + std::to_string(im[1] + 1) + "," +
                             std::to_string(im[2] + 1) + "," + std::to_string(im[3] + 1) +
                             ") conflicts with an earlier value");
      }
      slot = v;
      g_set_[idx] = 1;
    }
  }

  Eigen::MatrixXd take_h() { return std::move(h_); }
  Tensor4 take_g() { return std::move(g_); }

 private:
  std::size_t n_;
  Eigen::MatrixXd h_;
  std::vector<char> h_set_;
  Tensor4 g_;
  std::vector<char> g_set_;
};

}  // namespace

ElectronicHamiltonian load_fcidump(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  Header hdr;

  // Header: first non-blank line, or a namelist block.
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const std::string up = upper(line);
    if (up.find("&FCI") != std::string::npos) {
      std::string block = line.substr(up.find("&FCI") + 4);
      bool closed = false;
      std::size_t start = lineno;
      auto close_in = [](const std::string& u) {
        return u.find("&END") != std::string::npos || u.find('/') != std::string::npos;
      };
      if (close_in(upper(block))) closed = true;
      while (!closed && std::getline(in, line)) {
        ++lineno;
        block += " " + line;
        if (close_in(upper(line))) closed = true;
      }
      if (!closed) throw ParseError(start, "unterminated &FCI header");
      const std::string ub = upper(block);
      auto cut = std::min(ub.find("&END"), ub.find('/'));
      scan_header_text(block.substr(0, cut), hdr, start);
    } else {
      scan_header_text(line, hdr, lineno);
    }
    have_header = true;
    break;
  }
  if (!have_header) throw SchemaError("empty input: missing NORB/NELEC header");
  if (!hdr.norb) throw SchemaError("header is missing NORB");
  if (!hdr.nelec) throw SchemaError("header is missing NELEC");
  if (*hdr.norb <= 0) throw SchemaError("NORB must be positive");
  if (*hdr.nelec < 0 || *hdr.nelec > 2 * *hdr.norb) throw SchemaError("NELEC outside [0, 2*NORB]");

  const auto n = std::size_t(*hdr.norb);
  Assembler asmb(n);
  std::optional<double> core;

  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    if (tok.size() != 5) {
      throw ParseError(lineno, "expected 'value p q r s', found " + std::to_string(tok.size()) + " fields");
    }
    const double v = parse_value(tok[0], lineno);
    std::array<long, 4> ix{};
    for (int k = 0; k < 4; ++k) {
      ix[std::size_t(k)] = parse_index(tok[std::size_t(k) + 1], lineno);
      if (ix[std::size_t(k)] < 0 || ix[std::size_t(k)] > long(n)) {
        throw ParseError(lineno, "index " + std::to_string(ix[std::size_t(k)]) + " outside [0, NORB]");
      }
    }
    const auto [p, q, r, s] = ix;
    if (p && q && r && s) {
      asmb.two_body(std::size_t(p - 1), std::size_t(q - 1), std::size_t(r - 1), std::size_t(s - 1), v, lineno);
    } else if (p && q && !r && !s) {
      asmb.one_body(std::size_t(p - 1), std::size_t(q - 1), v, lineno);
    } else if (!p && !q && !r && !s) {
      if (core && std::abs(*core - v) > kConflictTol) throw IntegrityError("line " + std::to_string(lineno) + ": conflicting core energy");
      core = v;
    } else {
      throw ParseError(lineno, "unsupported index pattern");
    }
  }
  return ElectronicHamiltonian(asmb.take_h(), asmb.take_g(), int(*hdr.nelec), core.value_or(0.0));
}

ElectronicHamiltonian load_fcidump_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return load_fcidump(f);
}

void write_fcidump(std::ostream& out, const ElectronicHamiltonian& H, double cutoff) {
  const auto n = H.n_spatial();
  out << "NORB=" << n << " NELEC=" << H.eta() << "\n";
  out << std::setprecision(17);
  const auto& g = H.g();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          const double v = g(p, q, r, s);
          if (std::abs(v) > cutoff) out << v << ' ' << p + 1 << ' ' << q + 1 << ' ' << r + 1 << ' ' << s + 1 << '\n';
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = H.h()(Eigen::Index(p), Eigen::Index(q));
      if (std::abs(v) > cutoff) out << v << ' ' << p + 1 << ' ' << q + 1 << " 0 0\n";
    }
  out << H.core_energy() << " 0 0 0 0\n";
}

}  // namespace blissthc::tensor_core
