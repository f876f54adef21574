#include "clrank/scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "clrank/serialize.hpp"

namespace clrank::scan {

using nlohmann::json;

namespace {

constexpr unsigned kMaxDegree = 255;

std::uint64_t pow_u64(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > UINT64_MAX / b) return UINT64_MAX;
    r *= b;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order on same-degree polynomials: lexicographic from the top coefficient.
bool witness_less(const FqPoly& a, const FqPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.coeffs.rbegin(), a.coeffs.rend(), b.coeffs.rbegin(), b.coeffs.rend());
}

void insert_witness(std::vector<FqPoly>& list, const FqPoly& p, unsigned cap) {
  if (cap == 0) return;
  if (list.size() >= cap && !witness_less(p, list.back())) return;
  list.insert(std::upper_bound(list.begin(), list.end(), p, witness_less), p);
  if (list.size() > cap) list.pop_back();
}

ff::Elem minus_one_pow(const ff::FieldCtx& f, unsigned n) { return n % 2 ? f.neg(f.one()) : f.one(); }

unsigned free_coefficients(const ScanSpec& spec) {
  return spec.mode == Mode::ShiftStable ? spec.m / spec.q : spec.m;
}

}  // namespace

// ---------------------------------------------------------------- spec

void validate(const ScanSpec& spec) {
  ff::FieldCtx::of_order(spec.q);  // throws for a non prime power
  if (spec.n == 0) throw std::invalid_argument("scan: n must be >= 1");
  if (spec.m == 0) throw std::invalid_argument("scan: degree must be >= 1");
  if (spec.m > kMaxDegree) throw std::invalid_argument("scan: degree too large");
  if (spec.lead == 0 || spec.lead >= spec.q) throw std::invalid_argument("scan: leading coefficient must be in F_q*");
  if (spec.mode == Mode::ShiftStable && spec.m % spec.q != 0)
    throw std::invalid_argument("scan: shift-stable mode needs q | m");
  if (spec.workers == 0) throw std::invalid_argument("scan: workers must be >= 1");
}

std::uint64_t enumeration_size(const ScanSpec& spec) { return pow_u64(spec.q, free_coefficients(spec)); }

// ---------------------------------------------------------------- table

void RankTable::add(unsigned m, ff::Elem a, unsigned rank, const FqPoly* p) {
  auto& cell = cells[{m, a}];
  if (cell.by_rank.size() <= rank) cell.by_rank.resize(rank + 1, 0);
  ++cell.by_rank[rank];
  ++cell.squarefree;
  if (p && rank >= 1) insert_witness(cell.witnesses[rank], *p, witness_cap);
}

std::uint64_t RankTable::exact(unsigned m, ff::Elem a, unsigned r) const {
  auto it = cells.find({m, a});
  if (it == cells.end() || r >= it->second.by_rank.size()) return 0;
  return it->second.by_rank[r];
}

std::uint64_t RankTable::at_least(unsigned m, ff::Elem a, unsigned r) const {
  auto it = cells.find({m, a});
  if (it == cells.end()) return 0;
  std::uint64_t s = 0;
  for (std::size_t i = r; i < it->second.by_rank.size(); ++i) s += it->second.by_rank[i];
  return s;
}

std::uint64_t RankTable::squarefree(unsigned m, ff::Elem a) const {
  auto it = cells.find({m, a});
  return it == cells.end() ? 0 : it->second.squarefree;
}

unsigned RankTable::max_rank() const {
  unsigned r = 0;
  for (const auto& [key, cell] : cells)
    for (std::size_t i = 0; i < cell.by_rank.size(); ++i)
      if (cell.by_rank[i]) r = std::max<unsigned>(r, static_cast<unsigned>(i));
  return r;
}

const std::vector<FqPoly>& RankTable::witnesses(unsigned m, ff::Elem a, unsigned exact_rank) const {
  static const std::vector<FqPoly> empty;
  auto it = cells.find({m, a});
  if (it == cells.end()) return empty;
  auto w = it->second.witnesses.find(exact_rank);
  return w == it->second.witnesses.end() ? empty : w->second;
}

void RankTable::merge(const RankTable& other) {
  if (other.q != q || other.n != n || other.shift_stable != shift_stable)
    throw std::invalid_argument("RankTable::merge: incompatible tables");
  for (const auto& [key, src] : other.cells) {
    auto& dst = cells[key];
    dst.enumerated += src.enumerated;
    dst.squarefree += src.squarefree;
    if (dst.by_rank.size() < src.by_rank.size()) dst.by_rank.resize(src.by_rank.size(), 0);
    for (std::size_t i = 0; i < src.by_rank.size(); ++i) dst.by_rank[i] += src.by_rank[i];
    for (const auto& [r, list] : src.witnesses) {
      auto& d = dst.witnesses[r];
      for (const auto& p : list) insert_witness(d, p, witness_cap);
    }
  }
  audit_checked += other.audit_checked;
  audit_mismatches += other.audit_mismatches;
}

std::string RankTable::to_csv(const std::vector<unsigned>& thresholds) const {
  unsigned top = max_rank();
  for (auto t : thresholds) top = std::max(top, t);
  std::ostringstream os;
  os << "m,a,r,count\n";
  for (const auto& [key, cell] : cells)
    for (unsigned r = 1; r <= top; ++r) os << key.m << ',' << key.a << ',' << r << ',' << at_least(key.m, key.a, r) << '\n';
  return os.str();
}

namespace {

json table_json(const RankTable& t) {
  json cells = json::array();
  for (const auto& [key, cell] : t.cells) {
    json at_least = json::object();
    for (unsigned r = 1; r < cell.by_rank.size(); ++r) at_least[std::to_string(r)] = t.at_least(key.m, key.a, r);
    json wit = json::object();
    for (const auto& [r, list] : cell.witnesses) {
      json arr = json::array();
      for (const auto& p : list) arr.push_back(io::format_poly(p));
      wit[std::to_string(r)] = std::move(arr);
    }
    cells.push_back({{"m", key.m},
                     {"a", key.a},
                     {"enumerated", cell.enumerated},
                     {"squarefree", cell.squarefree},
                     {"by_rank", cell.by_rank},
                     {"at_least", std::move(at_least)},
                     {"witnesses", std::move(wit)}});
  }
  return {{"q", t.q},
          {"n", t.n},
          {"shift_stable", t.shift_stable},
          {"witness_cap", t.witness_cap},
          {"audit", {{"checked", t.audit_checked}, {"mismatches", t.audit_mismatches}}},
          {"cells", std::move(cells)}};
}

RankTable table_from_json(const json& j) {
  RankTable t;
  t.q = j.at("q").get<std::uint32_t>();
  t.n = j.at("n").get<unsigned>();
  t.shift_stable = j.at("shift_stable").get<bool>();
  t.witness_cap = j.at("witness_cap").get<unsigned>();
  t.audit_checked = j.at("audit").at("checked").get<std::uint64_t>();
  t.audit_mismatches = j.at("audit").at("mismatches").get<std::uint64_t>();
  const auto field = ff::FieldCtx::of_order(t.q);
  for (const auto& c : j.at("cells")) {
    CellTally cell;
    cell.enumerated = c.at("enumerated").get<std::uint64_t>();
    cell.squarefree = c.at("squarefree").get<std::uint64_t>();
    cell.by_rank = c.at("by_rank").get<std::vector<std::uint64_t>>();
    for (const auto& [r, arr] : c.at("witnesses").items()) {
      auto& list = cell.witnesses[static_cast<unsigned>(std::stoul(r))];
      for (const auto& s : arr) list.push_back(io::parse_poly(field, s.get<std::string>()));
    }
    t.cells[{c.at("m").get<unsigned>(), c.at("a").get<ff::Elem>()}] = std::move(cell);
  }
  return t;
}

}  // namespace

std::string RankTable::to_json() const { return table_json(*this).dump(2) + "\n"; }

RankTable RankTable::from_json(const std::string& text) {
  try {
    return table_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("RankTable JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- kernel

namespace {

unsigned reduced_size(unsigned q, unsigned n, unsigned m) {
  const unsigned k_min = (m + n + q - 2) / (q - 1);
  return k_min - 1;
}

unsigned extension_degree(unsigned q, unsigned points) {
  unsigned e = 1;
  std::uint64_t size = q;
  while (size < points) {
    size *= q;
    ++e;
  }
  return e;
}

}  // namespace

bool RankKernel::supported(const ff::FieldCtx& field, unsigned n, unsigned m) {
  const unsigned q = field.size();
  if (q > 256) return false;
  const std::uint64_t points = std::uint64_t(n) * reduced_size(q, n, m) + 1;
  return pow_u64(q, extension_degree(q, static_cast<unsigned>(std::min<std::uint64_t>(points, 1u << 20)))) <= 256;
}

RankKernel::RankKernel(const ff::FieldCtx& field, unsigned n, unsigned m) : field_(field), n_(n), m_(m) {
  if (!supported(field, n, m)) throw std::invalid_argument("RankKernel: evaluation field would exceed 256 elements");
  q_ = field.size();
  k_ = reduced_size(q_, n, m);
  boundary_ = (m + n) % (q_ - 1) == 0;
  const unsigned npoints = n * k_ + 1;
  const unsigned e = extension_degree(q_, npoints);
  ff::FieldCtx ext = field;
  std::vector<ff::Elem> embed(q_);
  for (unsigned x = 0; x < q_; ++x) embed[x] = x;
  if (e > 1) {
    auto x = ff::make_extension(field, e);
    ext = x.field;
    embed = x.embed;
  }
  size_ = ext.size();
  add_.resize(size_ * size_);
  mul_.resize(size_ * size_);
  neg_.resize(size_);
  inv_.resize(size_);
  for (unsigned a = 0; a < size_; ++a) {
    neg_[a] = static_cast<std::uint8_t>(ext.neg(a));
    inv_[a] = a ? static_cast<std::uint8_t>(ext.inv(a)) : 0;
    for (unsigned b = 0; b < size_; ++b) {
      add_[a * size_ + b] = static_cast<std::uint8_t>(ext.add(a, b));
      mul_[a * size_ + b] = static_cast<std::uint8_t>(ext.mul(a, b));
    }
  }
  embed_.assign(embed.begin(), embed.end());
  for (unsigned t = 0; t < npoints; ++t) points_.push_back(static_cast<std::uint8_t>(t));
  const unsigned p = field.characteristic();
  for (auto t : points_) {
    std::vector<std::uint8_t> w(n + 1);
    for (unsigned l = 0; l <= n; ++l) {
      ff::Elem c = ext.mul(ext.pow(t, n - l), embed[field.from_int(ff::binom_mod_p(n, l, p))]);
      if (l % 2) c = ext.neg(c);
      w[l] = static_cast<std::uint8_t>(c);
    }
    weights_.push_back(std::move(w));
  }
}

bool RankKernel::singular(std::uint8_t* b, unsigned k) const {
  for (unsigned col = 0; col < k; ++col) {
    unsigned piv = col;
    while (piv < k && b[piv * k + col] == 0) ++piv;
    if (piv == k) return true;
    if (piv != col)
      for (unsigned j = col; j < k; ++j) std::swap(b[piv * k + j], b[col * k + j]);
    const std::uint8_t inv = inv_[b[col * k + col]];
    for (unsigned r = col + 1; r < k; ++r) {
      const std::uint8_t x = b[r * k + col];
      if (!x) continue;
      const std::uint8_t f = neg_[mul(x, inv)];
      for (unsigned j = col; j < k; ++j) b[r * k + j] = add(b[r * k + j], mul(f, b[col * k + j]));
    }
  }
  return false;
}

unsigned RankKernel::eigen_one_multiplicity(std::uint8_t* b, unsigned k) const {
  // Algebraic multiplicity of 0 for B = k - rank(B^s), any s >= k.
  std::array<std::uint8_t, 64 * 64> x{}, y{};
  std::copy(b, b + k * k, x.begin());
  for (unsigned s = 1; s < k; s *= 2) {
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) {
        std::uint8_t acc = 0;
        for (unsigned l = 0; l < k; ++l) acc = add(acc, mul(x[i * k + l], x[l * k + j]));
        y[i * k + j] = acc;
      }
    x = y;
  }
  unsigned rank = 0;
  for (unsigned col = 0; col < k && rank < k; ++col) {
    unsigned piv = rank;
    while (piv < k && x[piv * k + col] == 0) ++piv;
    if (piv == k) continue;
    if (piv != rank)
      for (unsigned j = 0; j < k; ++j) std::swap(x[piv * k + j], x[rank * k + j]);
    const std::uint8_t inv = inv_[x[rank * k + col]];
    for (unsigned r = rank + 1; r < k; ++r) {
      const std::uint8_t v = x[r * k + col];
      if (!v) continue;
      const std::uint8_t f = neg_[mul(v, inv)];
      for (unsigned j = col; j < k; ++j) x[r * k + j] = add(x[r * k + j], mul(f, x[rank * k + j]));
    }
    ++rank;
  }
  return k - rank;
}

unsigned RankKernel::rank(const ff::Elem* coeffs) const {
  const ff::Elem lead = coeffs[m_];
  // The last row of the minimal matrix is zero except possibly its diagonal
  // entry (-1)^n a_m, which splits off the factor 1 - (-1)^n a_m U.
  const unsigned extra = boundary_ && minus_one_pow(field_, n_) == lead ? 1 : 0;
  const unsigned k = k_;
  if (k == 0) return extra;
  if (k > 64) throw std::logic_error("RankKernel: matrix too large");
  std::array<std::uint8_t, kMaxDegree + 1> a{};
  for (unsigned i = 0; i <= m_; ++i) a[i] = embed_[coeffs[i]];
  const unsigned span = m_ + n_;
  std::array<std::uint8_t, kMaxDegree + 64> g{};
  std::vector<std::uint8_t> mats(points_.size() * k * k);
  const std::uint8_t minus_one = neg_[1];
  auto build = [&](std::size_t pi, std::uint8_t* b) {
    const auto& w = weights_[pi];
    for (unsigned s = 0; s <= span; ++s) {
      std::uint8_t acc = 0;
      for (unsigned l = 0; l <= n_ && l <= s; ++l)
        if (s - l <= m_) acc = add(acc, mul(w[l], a[s - l]));
      g[s] = acc;
    }
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) {
        const long s = static_cast<long>((i + 1) * q_) - static_cast<long>(j + 1);
        std::uint8_t v = (s >= 0 && s <= static_cast<long>(span)) ? g[s] : 0;
        if (i == j) v = add(v, minus_one);
        b[i * k + j] = v;
      }
  };
  // det(M(t) - I) != 0 at any point means L(1) != 0.
  std::array<std::uint8_t, 64 * 64> scratch{};
  for (std::size_t pi = 0; pi < points_.size(); ++pi) {
    std::uint8_t* b = mats.data() + pi * k * k;
    build(pi, b);
    std::copy(b, b + k * k, scratch.begin());
    if (!singular(scratch.data(), k)) return extra;
  }
  unsigned best = k;
  for (std::size_t pi = 0; pi < points_.size() && best > 1; ++pi)
    best = std::min(best, eigen_one_multiplicity(mats.data() + pi * k * k, k));
  return extra + best;
}

bool squarefree_raw(const ff::FieldCtx& f, const ff::Elem* coeffs, unsigned m) {
  if (m == 0) return true;
  if (m > kMaxDegree) throw std::invalid_argument("squarefree_raw: degree too large");
  std::array<ff::Elem, kMaxDegree + 1> a{}, b{};
  std::copy(coeffs, coeffs + m + 1, a.begin());
  int da = static_cast<int>(m), db = -1;
  for (unsigned i = 1; i <= m; ++i) {
    b[i - 1] = f.mul(f.from_int(i), coeffs[i]);
    if (b[i - 1]) db = static_cast<int>(i - 1);
  }
  if (db < 0) return false;  // P' = 0 with deg P > 0: P is a p-th power
  while (db >= 0) {
    const ff::Elem inv = f.inv(b[db]);
    for (int top = da; top >= db; --top) {
      const ff::Elem c = f.mul(a[top], inv);
      if (!c) continue;
      for (int i = 0; i <= db; ++i) a[top - db + i] = f.sub(a[top - db + i], f.mul(c, b[i]));
    }
    int dr = db - 1;
    while (dr >= 0 && a[dr] == 0) --dr;
    std::swap(a, b);
    da = db;
    db = dr;
  }
  return da == 0;
}

FqPoly shift_stable_expand(const ff::FieldCtx& field, const std::vector<ff::Elem>& c) {
  poly::FqPolyRing ring(field);
  const FqPoly base = ring.sub(ring.monomial(field.one(), field.size()), ring.variable());
  FqPoly acc, power = ring.one();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!field.valid(c[i])) throw std::invalid_argument("shift_stable_expand: coefficient outside the field");
    acc = ring.add(acc, ring.scale(power, c[i]));
    if (i + 1 < c.size()) power = ring.mul(power, base);
  }
  return acc;
}

namespace {

void digits_of(std::uint64_t index, unsigned q, unsigned count, ff::Elem* out) {
  for (unsigned i = 0; i < count; ++i) {
    out[i] = static_cast<ff::Elem>(index % q);
    index /= q;
  }
}

}  // namespace

FqPoly enumerate_at(const ff::FieldCtx& field, const ScanSpec& spec, std::uint64_t index) {
  const unsigned free = free_coefficients(spec);
  std::vector<ff::Elem> c(free + 1);
  digits_of(index, spec.q, free, c.data());
  c[free] = spec.lead;
  if (spec.mode == Mode::ShiftStable) return shift_stable_expand(field, c);
  return FqPoly(std::move(c));
}

// ---------------------------------------------------------------- run

namespace {

RankTable empty_table(const ScanSpec& spec) {
  RankTable t;
  t.q = spec.q;
  t.n = spec.n;
  t.shift_stable = spec.mode == Mode::ShiftStable;
  t.witness_cap = spec.witness_cap;
  return t;
}

json spec_json(const ScanSpec& spec, std::uint64_t chunk) {
  return {{"q", spec.q},         {"n", spec.n},   {"m", spec.m},
          {"lead", spec.lead},   {"shift_stable", spec.mode == Mode::ShiftStable},
          {"chunk", chunk},      {"witness_cap", spec.witness_cap},
          {"audit_period", spec.audit_period}};
}

struct Checkpoint {
  std::string path;
  json spec;
  std::map<std::uint64_t, json> done;
  std::mutex mu;

  void load() {
    std::ifstream in(path);
    if (!in) return;
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw std::runtime_error("checkpoint " + path + ": " + e.what());
    }
    if (j.at("spec") != spec) throw std::runtime_error("checkpoint " + path + " belongs to a different scan");
    for (const auto& [id, tally] : j.at("chunks").items()) done[std::stoull(id)] = tally;
  }

  void save(std::uint64_t id, const RankTable& t) {
    std::lock_guard lock(mu);
    done[id] = table_json(t);
    json chunks = json::object();
    for (const auto& [k, v] : done) chunks[std::to_string(k)] = v;
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp);
      out << json{{"spec", spec}, {"chunks", chunks}}.dump() << "\n";
      if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }
};

}  // namespace

RankTable run_scan(const ScanSpec& spec) {
  validate(spec);
  const auto field = ff::FieldCtx::of_order(spec.q);
  const std::uint64_t total = enumeration_size(spec);
  if (total > spec.cap && !spec.force)
    throw std::runtime_error("enumeration of " + std::to_string(total) + " polynomials exceeds the cap of " +
                             std::to_string(spec.cap) + " (use --force)");
  const std::uint64_t chunk = spec.chunk ? spec.chunk : std::min<std::uint64_t>(total, 59049);
  const std::uint64_t nchunks = (total + chunk - 1) / chunk;

  std::optional<RankKernel> kernel;
  if (RankKernel::supported(field, spec.n, spec.m)) kernel.emplace(field, spec.n, spec.m);

  std::unique_ptr<Checkpoint> ckpt;
  std::vector<std::optional<RankTable>> results(nchunks);
  if (!spec.checkpoint.empty()) {
    ckpt = std::make_unique<Checkpoint>();
    ckpt->path = spec.checkpoint;
    ckpt->spec = spec_json(spec, chunk);
    ckpt->load();
    for (const auto& [id, tally] : ckpt->done)
      if (id < nchunks) results[id] = table_from_json(tally);
  }

  const unsigned free = free_coefficients(spec);
  const std::uint64_t salt = splitmix64((std::uint64_t(spec.m) << 32) ^ (std::uint64_t(spec.lead) << 8) ^ spec.n);

  auto run_chunk = [&](std::uint64_t id) {
    RankTable t = empty_table(spec);
    auto& cell = t.cells[{spec.m, spec.lead}];
    const std::uint64_t begin = id * chunk, end = std::min(total, begin + chunk);
    std::vector<ff::Elem> digits(free + 1, 0);
    digits_of(begin, spec.q, free, digits.data());
    digits[free] = spec.lead;
    FqPoly p;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      ++cell.enumerated;
      const ff::Elem* coeffs;
      if (spec.mode == Mode::ShiftStable) {
        p = shift_stable_expand(field, digits);
        coeffs = p.coeffs.data();
      } else {
        coeffs = digits.data();
      }
      if (squarefree_raw(field, coeffs, spec.m)) {
        const bool audit = spec.audit_period && splitmix64(idx ^ salt) % spec.audit_period == 0;
        unsigned r;
        if (kernel) {
          r = kernel->rank(coeffs);
          if (audit) {
            ++t.audit_checked;
            const TwistedPower tp(field, FqPoly(std::vector<ff::Elem>(coeffs, coeffs + spec.m + 1)), spec.n);
            if (motive::analytic_rank(tp) != r) ++t.audit_mismatches;
          }
        } else {
          r = motive::analytic_rank(TwistedPower(field, FqPoly(std::vector<ff::Elem>(coeffs, coeffs + spec.m + 1)), spec.n));
        }
        if (r >= 1) {
          const FqPoly w(std::vector<ff::Elem>(coeffs, coeffs + spec.m + 1));
          t.add(spec.m, spec.lead, r, &w);
        } else {
          t.add(spec.m, spec.lead, r, nullptr);
        }
      }
      // little-endian odometer over the free coefficients
      for (unsigned i = 0; i < free; ++i) {
        if (++digits[i] < spec.q) break;
        digits[i] = 0;
      }
    }
    return t;
  };

  std::atomic<std::uint64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (std::uint64_t id; (id = next.fetch_add(1)) < nchunks;) {
        if (results[id]) continue;
        results[id] = run_chunk(id);
        if (ckpt) ckpt->save(id, *results[id]);
      }
    } catch (...) {
      std::lock_guard lock(err_mu);
      if (!error) error = std::current_exception();
      next = nchunks;
    }
  };
  const unsigned nworkers = static_cast<unsigned>(std::min<std::uint64_t>(spec.workers, nchunks));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < nworkers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  RankTable out = empty_table(spec);
  out.cells[{spec.m, spec.lead}];
  for (const auto& r : results) out.merge(*r);
  return out;
}

RankTable run_scans(ScanSpec base, unsigned m_lo, unsigned m_hi, std::optional<ff::Elem> lead) {
  if (m_lo > m_hi) throw std::invalid_argument("scan: empty degree range");
  RankTable out = empty_table(base);
  const std::string ckpt = base.checkpoint;
  for (unsigned m = m_lo; m <= m_hi; ++m) {
    if (base.mode == Mode::ShiftStable && m % base.q != 0) continue;
    for (ff::Elem a = 1; a < base.q; ++a) {
      if (lead && *lead != a) continue;
      ScanSpec s = base;
      s.m = m;
      s.lead = a;
      if (!ckpt.empty()) s.checkpoint = ckpt + ".m" + std::to_string(m) + ".a" + std::to_string(a);
      out.merge(run_scan(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------- coset

CosetReport coset_audit(std::uint32_t q, unsigned n, unsigned m_max) {
  const auto field = ff::FieldCtx::of_order(q);
  if (n == 0) throw std::invalid_argument("coset_audit: n must be >= 1");
  if (pow_u64(q, m_max) > 43046721) throw std::invalid_argument("coset_audit: degree bound exceeds the resource cap");
  CosetReport rep;
  rep.q = q;
  rep.n = n;
  rep.m_max = m_max;
  const unsigned d = q - 1;
  const ff::Elem sign = minus_one_pow(field, n);
  for (ff::Elem a = 1; a < q; ++a)
    for (unsigned res = 0; res < d; ++res)
      rep.classes.push_back({a, res, a == sign && (res + n) % d == 0, 0, 0});
  for (unsigned m = 0; m <= m_max; ++m)
    for (ff::Elem a = 1; a < q; ++a) {
      auto& cls = rep.classes[(a - 1) * d + m % d];
      const std::uint64_t total = pow_u64(q, m);
      std::vector<ff::Elem> c(m + 1, 0);
      c[m] = a;
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        digits_of(idx, q, m, c.data());
        const FqPoly p(c);
        const unsigned r = motive::analytic_rank(TwistedPower(field, p, n));
        ++cls.total;
        if (r >= 1) ++cls.rank_ge1;
        if (cls.in_coset) {
          ++rep.coset_members;
          if (r == 0) {
            ++rep.violations;
            if (rep.violating.size() < 16) rep.violating.push_back(p);
          }
        } else {
          ++rep.off_coset;
          if (r >= 1) ++rep.off_coset_rank_ge1;
        }
      }
    }
  return rep;
}

// ---------------------------------------------------------------- dimensions

std::int64_t equation_count(std::int64_t r0, std::int64_t k) { return r0 * (k + 1) - r0 * (r0 - 1) / 2; }

namespace {

/// Variables minus equations for the boundary family at size k and rank r.
std::int64_t boundary_slack(std::int64_t q, std::int64_t r, std::int64_t k) {
  return (k * (q - 1) - 1) - equation_count(r - 1, k - 1);
}

/// Smallest k >= r with nonnegative slack, if any.  The slack is affine in
/// k, so checking k = r and the sign of the slope decides it.
std::optional<unsigned> smallest_feasible_k(std::int64_t q, std::int64_t r) {
  if (r < 1) return std::nullopt;
  if (boundary_slack(q, r, r) >= 0) return static_cast<unsigned>(r);
  const std::int64_t slope = q - r;
  if (slope <= 0) return std::nullopt;
  const std::int64_t deficit = -boundary_slack(q, r, r);
  return static_cast<unsigned>(r + (deficit + slope - 1) / slope);
}

bool infinitely_many(std::int64_t q, std::int64_t r) {
  const std::int64_t slope = q - r;
  if (slope != 0) return slope > 0;
  return boundary_slack(q, r, r) >= 0;  // constant in k
}

}  // namespace

DimReport dim_report(std::uint32_t q, unsigned r, DimMode mode, unsigned m, ff::Elem a, unsigned n) {
  if (q < 2) throw std::invalid_argument("dim_report: q must be >= 2");
  if (r == 0) throw std::invalid_argument("dim_report: r must be >= 1");
  DimReport rep;
  rep.q = q;
  rep.r = r;
  rep.mode = mode;
  rep.bound_2q_minus_3 = 2 * q >= 3 ? 2 * q - 3 : 0;
  const std::int64_t Q = q;
  switch (mode) {
    case DimMode::Single:
    case DimMode::InfiniteFamily: {
      auto feasible = [&](std::int64_t rr) {
        return mode == DimMode::Single ? smallest_feasible_k(Q, rr).has_value() : infinitely_many(Q, rr);
      };
      // Feasibility fails from some r on; 4q is past every threshold.
      for (unsigned rr = 1; rr <= 4 * q + 4; ++rr)
        if (feasible(rr)) rep.max_feasible_r = rr;
      rep.feasible = feasible(r);
      rep.k = smallest_feasible_k(Q, r).value_or(r);
      rep.parameters = std::int64_t(rep.k) * (Q - 1) - 1;
      rep.equations = equation_count(std::int64_t(r) - 1, std::int64_t(rep.k) - 1);
      rep.expected_dim = rep.parameters - rep.equations;
      break;
    }
    case DimMode::ShiftStable: {
      if (m == 0 || m % q != 0) throw std::invalid_argument("dim_report: shift-stable mode needs q | m");
      if (a == 0 || a >= q) throw std::invalid_argument("dim_report: leading coefficient must be in F_q*");
      const auto field = ff::FieldCtx::of_order(q);
      const unsigned k = reduced_size(q, n, m);
      const bool coset = (m + n) % (q - 1) == 0 && a == minus_one_pow(field, n);
      const unsigned needed = coset ? r - 1 : r;
      rep.k = k;
      rep.parameters = m / q;
      for (unsigned i = 0; i < needed; ++i) rep.equations += i <= k ? (k - i) / q + 1 : 0;
      rep.expected_dim = rep.parameters - rep.equations;
      rep.feasible = rep.expected_dim >= 0;
      break;
    }
  }
  return rep;
}

}  // namespace clrank::scan
