#include "blissthc/logical_cost.hpp"

#include "blissthc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace blissthc::cost {

namespace {

using i64 = std::int64_t;

i64 clog2(i64 x) {
  i64 b = 0;
  while ((i64(1) << b) < x) ++b;
  return b;
}

i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

// Measurement-based uncompute of a lookup over `items` entries: ceil(items/k) + k Toffolis.
std::pair<i64, i64> unload(i64 items, i64 max_qubits = std::numeric_limits<i64>::max()) {
  i64 best = std::numeric_limits<i64>::max(), best_k = 1;
  for (i64 k = 1; k <= std::max<i64>(items, 1) && k <= max_qubits; k *= 2) {
    const i64 c = ceil_div(items, k) + k;
    if (c < best) {
      best = c;
      best_k = k;
    }
  }
  return {best == std::numeric_limits<i64>::max() ? items + 1 : best, best_k};
}

struct Sizes {
  i64 n, G, nM, d, nc, m, b, iterations, base;
};

Sizes sizes(const CircuitParams& p) {
  p.validate();
  Sizes s{};
  s.n = i64(p.n_spatial());
  s.G = s.n - 1;
  const i64 M = i64(p.M);
  s.nM = clog2(M + 1);
  s.d = M * (M + 1) / 2 + s.n;
  s.nc = clog2(s.d);
  s.m = p.aleph + 2 * s.nM + 2;  // alias-sampling entry: keep value, alt index pair, sign bits
  s.b = angle_bits(p);
  s.iterations = qpe_iterations(p.lambda_thc, p.epsilon_pea);
  const i64 prepare_persistent = 4 * s.nM + 2 * p.aleph + s.nc + 6;
  s.base = i64(p.N) + prepare_persistent + clog2(s.iterations);
  return s;
}

i64 select_highwater(const CircuitParams& p, const Sizes& s) {
  const auto bt = batching(p);
  i64 hw = s.base + i64(bt.r_eff) * s.b + (s.b + 1) + s.b + clog2(i64(p.M) + s.n) + 11;
  if (p.encoding == Encoding::unary) hw += unary_conversion_qubits(p);
  return hw;
}

i64 prepare_highwater(const CircuitParams& p, const CostTable& t, const Sizes& s) {
  return s.base + prepare_loader(p, t).extra_qubits;
}

SubroutineCost select_part(const CircuitParams& p, const CostTable& t, const Sizes& s) {
  const bool mod = p.select_variant == SelectVariant::modified;
  const auto bt = batching(p);
  const double el = t.elbow_pair();
  const i64 beth = p.beth;
  SubroutineCost c;

  // Givens rotations: two subselects, each rotating both spin registers forth and back.
  const i64 rotations = 4 * s.G;
  const i64 adder_tof = mod ? 2 * beth - 1 : 2 * beth;
  const double adder_clifford = mod ? double(beth) : double(2 * (beth + 1));
  c.toffoli += rotations * adder_tof;
  c.av_blocks += double(rotations) * (double(adder_tof) * el + adder_clifford * t.adder_clifford_per_bit + t.givens_clifford);

  // Angle loaders: first subselect over M + n rotations (two- and one-body), second over M.
  const i64 data_bits_per_item = s.b * (2 * s.G - i64(bt.last));
  for (const i64 items : {i64(p.M) + s.n, i64(p.M)}) {
    const auto [ut, uk] = unload(items);
    (void)uk;
    if (p.encoding == Encoding::unary) {
      c.toffoli += items + ut;
      c.av_blocks += double(items + ut) * el + double(items) * t.unload_item;
    } else {
      const i64 calls = 2 * i64(bt.batches) - 1;
      c.toffoli += calls * items + ut;
      c.av_blocks += double(calls * items + ut) * el + double(items * data_bits_per_item) * t.loader_bit +
                     double(items) * t.unload_item;
    }
  }
  if (p.encoding == Encoding::unary) {
    const i64 items_total = 2 * i64(p.M) + s.n;
    c.av_blocks += double(items_total * data_bits_per_item) * t.loader_bit;
  }

  const i64 swaps = 4 * s.n + 4 * s.nM;
  const i64 compare = 2 * s.nM;
  c.toffoli += swaps + compare;
  c.av_blocks += double(swaps) * t.controlled_swap + double(compare) * t.comparator_bit;
  c.memory_highwater = select_highwater(p, s);
  return c;
}

i64 usp_toffoli(const Sizes& s) { return 3 * s.nc + 2; }
i64 contiguizer_toffoli(const Sizes& s) { return s.nM * s.nM + s.nM - 1; }

SubroutineCost prepare_part(const CircuitParams& p, const CostTable& t, const Sizes& s) {
  const double el = t.elbow_pair();
  const auto L = prepare_loader(p, t);
  const i64 usp = usp_toffoli(s), contig = contiguizer_toffoli(s);
  SubroutineCost c;
  c.toffoli = usp + contig + L.toffoli + p.aleph + 2 * s.nM + s.nM;
  c.av_blocks = double(usp + contig) * el + double(s.nc) * t.hadamard_bundle + L.av_blocks +
                double(p.aleph + s.nM) * t.comparator_bit + double(2 * s.nM) * t.controlled_swap;
  c.memory_highwater = s.base + L.extra_qubits;
  return c;
}

SubroutineCost prepare_dagger_part(const CircuitParams& p, const CostTable& t, const Sizes& s) {
  const double el = t.elbow_pair();
  const i64 usp = usp_toffoli(s), contig = contiguizer_toffoli(s);
  // The unload register may not raise the highwater set by Select or Prepare.
  const i64 cap = std::max(select_highwater(p, s), prepare_highwater(p, t, s));
  i64 best = std::numeric_limits<i64>::max(), best_k = 1;
  for (i64 k = 1; k <= s.d; k *= 2) {
    if (s.base + k + clog2(ceil_div(s.d, k)) > cap) break;
    const i64 cst = ceil_div(s.d, k) + k;
    if (cst < best) {
      best = cst;
      best_k = k;
    }
  }
  if (best == std::numeric_limits<i64>::max()) best = s.d + 1;
  SubroutineCost c;
  c.toffoli = usp + contig + best + 2 * s.nM;
  c.av_blocks = double(usp + contig + best) * el + double(s.nc) * t.hadamard_bundle + double(s.d) * t.unload_item +
                double(2 * s.nM) * t.controlled_swap;
  c.memory_highwater = s.base + best_k + clog2(ceil_div(s.d, best_k));
  return c;
}

SubroutineCost qpe_part(const CircuitParams& p, const CostTable& t, const Sizes& s) {
  const i64 refl = 2 * s.nM + p.aleph + s.nc + 2;
  SubroutineCost c;
  c.toffoli = refl;
  c.av_blocks = double(refl) * t.elbow_pair() + t.qpe_control;
  c.memory_highwater = s.base;
  return c;
}

LogicalCost single(const std::string& key, const SubroutineCost& part) {
  LogicalCost c;
  c.iterations = 1;
  c.breakdown[key] = part;
  c.toffoli = part.toffoli;
  c.t_residual = 0;
  c.t_count = toffoli_to_t(c.toffoli, 0);
  c.av_blocks = part.av_blocks;
  c.memory_qubits = part.memory_highwater;
  return c;
}

}  // namespace

std::string to_string(LoaderMode m) { return m == LoaderMode::qroam ? "qroam" : "qrom"; }
std::string to_string(Encoding e) { return e == Encoding::binary ? "binary" : "unary"; }
std::string to_string(SelectVariant v) { return v == SelectVariant::modified ? "modified" : "prior_art"; }

LoaderMode loader_mode_from_string(const std::string& s) {
  if (s == "qroam") return LoaderMode::qroam;
  if (s == "qrom") return LoaderMode::qrom;
  throw SchemaError("unknown loader mode '" + s + "'");
}
Encoding encoding_from_string(const std::string& s) {
  if (s == "binary") return Encoding::binary;
  if (s == "unary") return Encoding::unary;
  throw SchemaError("unknown encoding '" + s + "'");
}
SelectVariant select_variant_from_string(const std::string& s) {
  if (s == "modified") return SelectVariant::modified;
  if (s == "prior_art") return SelectVariant::prior_art;
  throw SchemaError("unknown select variant '" + s + "'");
}

void CircuitParams::validate() const {
  if (N < 4 || N % 2 != 0) throw DomainError("N must be an even spin-orbital count >= 4");
  if (M < 1) throw DomainError("M must be >= 1");
  if (aleph < 1 || aleph > 40 || beth < 1 || beth > 40) throw DomainError("aleph and beth must lie in [1, 40]");
  if (batch_size && (*batch_size < 1 || *batch_size > n_spatial() - 1))
    throw DomainError("batch size must lie in [1, n_spatial - 1]");
  if (!(epsilon_pea > 0.0)) throw DomainError("epsilon_pea must be positive");
  if (!(lambda_thc > 0.0) || !std::isfinite(lambda_thc)) throw DomainError("lambda_thc must be positive");
}

nlohmann::json to_json(const CircuitParams& p) {
  nlohmann::json j = {{"N", p.N},
                      {"M", p.M},
                      {"aleph", p.aleph},
                      {"beth", p.beth},
                      {"loader_mode", to_string(p.loader_mode)},
                      {"encoding", to_string(p.encoding)},
                      {"select_variant", to_string(p.select_variant)},
                      {"epsilon_pea", p.epsilon_pea},
                      {"lambda_thc", p.lambda_thc}};
  j["batch_size"] = p.batch_size ? nlohmann::json(*p.batch_size) : nlohmann::json("all");
  return j;
}

CircuitParams circuit_params_from_json(const nlohmann::json& j) {
  try {
    CircuitParams p;
    p.N = j.at("N").get<std::size_t>();
    p.M = j.at("M").get<std::size_t>();
    p.aleph = j.at("aleph").get<int>();
    p.beth = j.at("beth").get<int>();
    p.lambda_thc = j.at("lambda_thc").get<double>();
    p.epsilon_pea = j.value("epsilon_pea", 1e-3);
    p.loader_mode = loader_mode_from_string(j.value("loader_mode", std::string("qroam")));
    p.encoding = encoding_from_string(j.value("encoding", std::string("binary")));
    p.select_variant = select_variant_from_string(j.value("select_variant", std::string("modified")));
    if (j.contains("batch_size") && !(j["batch_size"].is_string() && j["batch_size"] == "all"))
      p.batch_size = j["batch_size"].get<std::size_t>();
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("circuit parameters: ") + e.what());
  }
}

nlohmann::json to_json(const LogicalCost& c) {
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [k, v] : c.breakdown)
    b[k] = {{"toffoli", v.toffoli}, {"av_blocks", v.av_blocks}, {"memory_highwater", v.memory_highwater}};
  return {{"iterations", c.iterations}, {"toffoli", c.toffoli},         {"t_residual", c.t_residual},
          {"t_count", c.t_count},       {"av_blocks", c.av_blocks},     {"memory_qubits", c.memory_qubits},
          {"breakdown", b}};
}

std::int64_t qpe_iterations(double lambda_thc, double epsilon_pea) {
  if (!(lambda_thc > 0.0) || !(epsilon_pea > 0.0)) throw DomainError("qpe_iterations needs positive inputs");
  const double v = std::numbers::pi * lambda_thc / (2.0 * epsilon_pea);
  // tolerate the last-ulp error of the product so exact integers are not bumped up
  return std::int64_t(std::ceil(v * (1.0 - 8.0 * std::numeric_limits<double>::epsilon())));
}

std::int64_t toffoli_to_t(std::int64_t toffoli, std::int64_t residual_t) {
  if (toffoli < 0 || residual_t < 0) throw DomainError("gate counts must be non-negative");
  return 4 * toffoli + residual_t;
}

Batching batching(const CircuitParams& p) {
  Batching b;
  b.angles = p.n_spatial() - 1;
  if (!p.batch_size) {
    b.batches = 1;
  } else {
    b.batches = (b.angles + *p.batch_size - 1) / *p.batch_size;
  }
  b.r_eff = (b.angles + b.batches - 1) / b.batches;
  b.last = b.angles - (b.batches - 1) * b.r_eff;
  return b;
}

std::int64_t angle_bits(const CircuitParams& p) {
  return p.select_variant == SelectVariant::modified ? p.beth : p.beth + 1;
}

std::int64_t angle_register_qubits(const CircuitParams& p) { return i64(batching(p).r_eff) * angle_bits(p); }

std::int64_t unary_conversion_qubits(const CircuitParams& p) { return i64(p.M) + i64(p.n_spatial()); }

LoaderReport prepare_loader(const CircuitParams& p, const CostTable& t) {
  p.validate();
  const i64 n = i64(p.n_spatial()), M = i64(p.M);
  const i64 nM = clog2(M + 1), d = M * (M + 1) / 2 + n;
  const i64 m = p.aleph + 2 * nM + 2;
  const double el = t.elbow_pair();
  LoaderReport L;
  L.mode = p.loader_mode;
  if (p.loader_mode == LoaderMode::qrom) {
    L.k = 1;
    L.toffoli = d;
    L.av_blocks = double(d) * el + double(d * m) * t.loader_bit;
    L.extra_qubits = clog2(d);
    return L;
  }
  i64 best = std::numeric_limits<i64>::max();
  for (i64 k = 1; k <= d; k *= 2) {
    const i64 c = ceil_div(d, k) + m * (k - 1);
    if (c < best) {
      best = c;
      L.k = k;
    }
  }
  L.toffoli = best;
  L.av_blocks = double(ceil_div(d, L.k)) * el + double(d * m) * t.loader_bit + double(m * (L.k - 1)) * t.controlled_swap;
  L.extra_qubits = m * (L.k - 1) + clog2(ceil_div(d, L.k));
  return L;
}

LogicalCost cost_select(const CircuitParams& p, const CostTable& t) { return single("select", select_part(p, t, sizes(p))); }

LogicalCost cost_prepare(const CircuitParams& p, const CostTable& t) {
  return single("prepare", prepare_part(p, t, sizes(p)));
}

LogicalCost cost_prepare_dagger(const CircuitParams& p, const CostTable& t) {
  return single("prepare_dagger", prepare_dagger_part(p, t, sizes(p)));
}

LogicalCost cost_algorithm(const CircuitParams& p, const CostTable& t) {
  t.validate();
  const auto s = sizes(p);
  const std::pair<const char*, SubroutineCost> parts[] = {{"prepare", prepare_part(p, t, s)},
                                                          {"prepare_dagger", prepare_dagger_part(p, t, s)},
                                                          {"select", select_part(p, t, s)},
                                                          {"qpe_overhead", qpe_part(p, t, s)}};
  LogicalCost c;
  c.iterations = s.iterations;
  for (const auto& [key, part] : parts) {
    SubroutineCost scaled{part.toffoli * s.iterations, part.av_blocks * double(s.iterations), part.memory_highwater};
    c.breakdown[key] = scaled;
    c.toffoli += scaled.toffoli;
    c.av_blocks += scaled.av_blocks;
    c.memory_qubits = std::max(c.memory_qubits, part.memory_highwater);
  }
  c.t_residual = 0;
  c.t_count = toffoli_to_t(c.toffoli, c.t_residual);
  return c;
}

std::int64_t qroam_qubits_estimate(std::size_t M, int aleph) {
  return std::llround(double(M) * std::sqrt(aleph / 2.0 + std::log2(double(M))));
}

std::int64_t qrom_qubits_estimate(std::size_t M, int aleph) { return aleph + 2 * clog2(i64(M)); }

double coefficient_accuracy(std::size_t M, std::size_t N, int aleph) {
  return std::ldexp(1.0, 1 - aleph) / double(M * (M + 1) + N);
}

std::vector<TradeoffPoint> batching_tradeoff(const CircuitParams& p, const std::vector<std::optional<std::size_t>>& rs,
                                             const CostTable& t) {
  if (rs.empty()) throw DomainError("batch list must be non-empty");
  std::vector<TradeoffPoint> out;
  for (const auto& r : rs) {
    CircuitParams q = p;
    q.batch_size = r;
    if (r) {
      q.loader_mode = LoaderMode::qroam;
      const auto s = sizes(q);
      if (prepare_highwater(q, t, s) > select_highwater(q, s)) q.loader_mode = LoaderMode::qrom;
    }
    const auto c = cost_algorithm(q, t);
    TradeoffPoint pt;
    pt.r = r;
    pt.r_eff = batching(q).r_eff;
    pt.loader_mode = q.loader_mode;
    pt.encoding = q.encoding;
    pt.memory_qubits = c.memory_qubits;
    pt.toffoli = c.toffoli;
    pt.t_count = c.t_count;
    pt.av_blocks = c.av_blocks;
    out.push_back(pt);
  }
  return out;
}

std::string tradeoff_csv(const std::vector<TradeoffPoint>& pts, const std::string& tool_version,
                         const std::string& calibration_hash) {
  std::ostringstream s;
  s << "r,loader_mode,encoding,memory_qubits,toffoli,t_count,av_blocks,tool_version,calibration_hash\n";
  s.precision(17);
  for (const auto& p : pts)
    s << (p.r ? std::to_string(*p.r) : std::string("all")) << ',' << to_string(p.loader_mode) << ','
      << to_string(p.encoding) << ',' << p.memory_qubits << ',' << p.toffoli << ',' << p.t_count << ',' << p.av_blocks
      << ',' << tool_version << ',' << calibration_hash << '\n';
  return s.str();
}

}  // namespace blissthc::cost
