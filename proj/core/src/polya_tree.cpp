#include "ptauction/polya_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ptauction/io.hpp"

namespace ptauction::pt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

void check_memberships(std::span<const int> z, int depth) {
  if (static_cast<int>(z.size()) != depth) {
    throw std::invalid_argument("membership vector length must equal the number of auctions");
  }
  for (int i = 0; i < depth; ++i) {
    if (z[i] < 1 || z[i] > i + 1) {
      throw std::invalid_argument("membership z_" + std::to_string(i + 1) + " = " + std::to_string(z[i]) +
                                  " outside [1, " + std::to_string(i + 1) + "]");
    }
  }
}

}  // namespace

std::optional<NodeIndex> NodeIndex::parse(std::string_view bits) {
  if (bits.empty()) return std::nullopt;
  const std::size_t zeros = bits.find_first_not_of('0');
  if (zeros == std::string_view::npos) return NodeIndex{static_cast<int>(bits.size()), false};
  if (zeros != bits.size() - 1 || bits.back() != '1') return std::nullopt;
  return NodeIndex{static_cast<int>(bits.size()), true};
}

std::string NodeIndex::bits() const {
  std::string s(static_cast<std::size_t>(level), '0');
  if (upper) s.back() = '1';
  return s;
}

Partition::Partition(std::vector<double> cutpoints) : cutpoints_(std::move(cutpoints)) {
  if (cutpoints_.empty()) throw std::invalid_argument("partition needs at least one auction");
  for (std::size_t i = 0; i < cutpoints_.size(); ++i) {
    if (!(cutpoints_[i] > 0.0) || !std::isfinite(cutpoints_[i])) {
      throw std::invalid_argument("partition cutpoints must be positive and finite");
    }
    if (i > 0 && !(cutpoints_[i] < cutpoints_[i - 1])) {
      throw std::invalid_argument("partition cutpoints must be strictly descending");
    }
  }
}

Interval Partition::lower(int m) const { return {0.0, cutpoint(m), false}; }

Interval Partition::upper(int m) const { return {cutpoint(m), m == 1 ? kInf : cutpoint(m - 1), true}; }

Interval Partition::interval(NodeIndex node) const {
  if (node.level < 1 || node.level > depth()) throw std::out_of_range("node level outside the partition");
  return node.upper ? upper(node.level) : lower(node.level);
}

std::vector<NodeIndex> Partition::nodes() const {
  std::vector<NodeIndex> out;
  out.reserve(node_count());
  for (int m = 1; m <= depth(); ++m) {
    out.push_back(NodeIndex::lower_at(m));
    out.push_back(NodeIndex::upper_at(m));
  }
  return out;
}

Partition build_partition(const auction::AuctionDataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("cannot build a partition from an empty dataset");
  std::vector<double> cuts;
  cuts.reserve(dataset.size());
  for (const auto& o : dataset.observations()) cuts.push_back(o.second_highest);
  return Partition(std::move(cuts));
}

DepthWeight quadratic_depth_weight(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("prior strength k must be finite and >= 0");
  return [k](int m) { return k * static_cast<double>(m) * static_cast<double>(m); };
}

DepthWeight constant_depth_weight(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("depth weight must be finite and >= 0");
  return [gamma](int) { return gamma; };
}

double HyperParams::alpha(NodeIndex node) const {
  const auto i = static_cast<std::size_t>(node.level - 1);
  return node.upper ? upper.at(i) : lower.at(i);
}

HyperParams init_hyperparams(const Partition& partition, const BaseMeasure& base,
                             const DepthWeight& depth_weight) {
  HyperParams h;
  h.lower.reserve(partition.node_count() / 2);
  h.upper.reserve(partition.node_count() / 2);
  for (int m = 1; m <= partition.depth(); ++m) {
    const double gamma = depth_weight(m);
    if (!(gamma >= 0.0)) throw std::invalid_argument("depth weight must be non-negative");
    h.lower.push_back(gamma * base.measure_of(partition.lower(m)));
    h.upper.push_back(gamma * base.measure_of(partition.upper(m)));
  }
  return h;
}

std::int64_t CountTable::count(NodeIndex node) const {
  const auto i = static_cast<std::size_t>(node.level - 1);
  return node.upper ? upper.at(i) : lower.at(i);
}

CountTable deterministic_counts(const auction::AuctionDataset& dataset) {
  const std::size_t depth = dataset.size();
  CountTable c;
  c.lower.assign(depth, 0);
  c.upper.assign(depth, 0);
  // lower[l] receives y_i2 for every i > l + 1 and the N_i - 2 lower
  // valuations for every i >= l + 1; accumulate from the deepest level up.
  std::int64_t running = 0;
  for (std::size_t l = depth; l-- > 0;) {
    running += dataset.n_bidders(l) - 2;  // auction l + 1 resolves down to level l + 1
    if (l + 1 < depth) running += 1;      // y_{l+2,2} lies in B_{0^{l+1}1}, inside B_{0^{l+1}}
    c.lower[l] = running;
    c.upper[l] = 1;  // y_{l+1,2}
  }
  return c;
}

void add_memberships(CountTable& counts, std::span<const int> z) {
  const int depth = counts.depth();
  check_memberships(z, depth);
  std::vector<std::int64_t> hits(static_cast<std::size_t>(depth) + 1, 0);  // hits[j] = #{i : z_i = j}
  for (int zi : z) {
    counts.upper[static_cast<std::size_t>(zi - 1)] += 1;
    hits[static_cast<std::size_t>(zi)] += 1;
  }
  // y_i1 in B_{0^{j-1}1} also lies in B_{0^l} for every l < j, so lower
  // level l gains #{i : z_i >= l + 1}.
  std::int64_t at_least = 0;
  for (int l = depth - 1; l >= 1; --l) {
    at_least += hits[static_cast<std::size_t>(l + 1)];
    counts.lower[static_cast<std::size_t>(l - 1)] += at_least;
  }
}

CountTable full_counts(const auction::AuctionDataset& dataset, std::span<const int> z) {
  CountTable c = deterministic_counts(dataset);
  add_memberships(c, z);
  return c;
}

HyperParams updated(const HyperParams& prior, const CountTable& counts) {
  if (prior.depth() != counts.depth()) throw std::invalid_argument("hyperparameter / count depth mismatch");
  HyperParams h = prior;
  for (std::size_t i = 0; i < h.lower.size(); ++i) {
    h.lower[i] += static_cast<double>(counts.lower[i]);
    h.upper[i] += static_cast<double>(counts.upper[i]);
  }
  return h;
}

Conditionals draw_conditionals(const HyperParams& hyper, const CountTable& counts, Rng& rng) {
  if (hyper.depth() != counts.depth()) throw std::invalid_argument("hyperparameter / count depth mismatch");
  const auto depth = static_cast<std::size_t>(hyper.depth());
  Conditionals c;
  c.lower.resize(depth);
  c.upper.resize(depth);
  c.log_lower.resize(depth);
  c.log_upper.resize(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    const double a = hyper.lower[i] + static_cast<double>(counts.lower[i]);
    const double b = hyper.upper[i] + static_cast<double>(counts.upper[i]);
    BetaDraw d;
    try {
      d = draw_beta(a, b, rng);
    } catch (const std::domain_error&) {
      throw std::domain_error("degenerate prior: level " + std::to_string(i + 1) +
                              " has zero prior weight and no data on either side");
    }
    c.lower[i] = d.lower;
    c.upper[i] = d.upper;
    c.log_lower[i] = d.log_lower;
    c.log_upper[i] = d.log_upper;
  }
  return c;
}

namespace {

// prefix[j] = log sum_{l <= j} P(B_{0^{l}1}) over 0-based j, where the path
// probability of the j-th upper set is prod_{l < j} C_lower[l] * C_upper[j].
std::vector<double> log_upper_prefix(const Conditionals& c, int count) {
  std::vector<double> prefix(static_cast<std::size_t>(count));
  double path = 0.0;  // log prod of lower conditionals so far
  double acc = -kInf;
  for (int j = 0; j < count; ++j) {
    const auto u = static_cast<std::size_t>(j);
    acc = log_add(acc, path + c.log_upper[u]);
    prefix[u] = acc;
    path += c.log_lower[u];
  }
  return prefix;
}

}  // namespace

std::vector<double> membership_probabilities(const Conditionals& c, int auction) {
  if (auction < 1 || auction > c.depth()) throw std::invalid_argument("auction index outside [1, M]");
  if (auction == 1) return {1.0};
  const auto prefix = log_upper_prefix(c, auction);
  const double total = prefix.back();
  std::vector<double> p(static_cast<std::size_t>(auction));
  double path = 0.0;
  for (int j = 0; j < auction; ++j) {
    const auto u = static_cast<std::size_t>(j);
    p[u] = total == -kInf ? 0.0 : std::exp(path + c.log_upper[u] - total);
    path += c.log_lower[u];
  }
  return p;
}

std::vector<int> draw_memberships(const Conditionals& c, int auctions, Rng& rng) {
  if (auctions < 1 || auctions > c.depth()) throw std::invalid_argument("auction count outside [1, M]");
  const auto prefix = log_upper_prefix(c, auctions);
  std::vector<int> z(static_cast<std::size_t>(auctions), 1);
  for (int i = 1; i < auctions; ++i) {
    const double total = prefix[static_cast<std::size_t>(i)];
    if (total == -kInf) continue;  // no admissible mass at all; keep B_1
    const double target = std::log(uniform01(rng)) + total;
    const auto end = prefix.begin() + i + 1;
    const auto it = std::lower_bound(prefix.begin(), end, target);
    z[static_cast<std::size_t>(i)] = static_cast<int>(std::min(it, end - 1) - prefix.begin()) + 1;
  }
  return z;
}

std::span<const int> GibbsOutput::memberships(std::size_t t) const {
  return std::span<const int>(z_).subspan(t * static_cast<std::size_t>(depth_), static_cast<std::size_t>(depth_));
}

std::span<const double> GibbsOutput::conditional_lower(std::size_t t) const {
  if (c_lower_.empty()) throw std::logic_error("Gibbs run did not keep the split draws");
  return std::span<const double>(c_lower_).subspan(t * static_cast<std::size_t>(depth_),
                                                   static_cast<std::size_t>(depth_));
}

std::span<const double> GibbsOutput::conditional_upper(std::size_t t) const {
  if (c_upper_.empty()) throw std::logic_error("Gibbs run did not keep the split draws");
  return std::span<const double>(c_upper_).subspan(t * static_cast<std::size_t>(depth_),
                                                   static_cast<std::size_t>(depth_));
}

HyperParams GibbsOutput::updated_alpha(const HyperParams& prior, std::size_t t) const {
  CountTable counts = deterministic_;
  add_memberships(counts, memberships(t));
  return updated(prior, counts);
}

GibbsOutput run_gibbs(const auction::AuctionDataset& dataset, const HyperParams& hyper,
                      const GibbsConfig& config) {
  if (config.draws < 1) throw std::invalid_argument("Gibbs sampler needs at least one retained draw");
  if (config.burn_in < 0) throw std::invalid_argument("burn-in must be non-negative");
  if (dataset.empty()) throw std::invalid_argument("Gibbs sampler needs at least one auction");
  if (hyper.depth() != static_cast<int>(dataset.size())) {
    throw std::invalid_argument("hyperparameters do not match the dataset's partition depth");
  }

  GibbsOutput out;
  out.depth_ = static_cast<int>(dataset.size());
  out.draws_ = static_cast<std::size_t>(config.draws);
  out.deterministic_ = deterministic_counts(dataset);
  const auto depth = static_cast<std::size_t>(out.depth_);
  out.z_.reserve(out.draws_ * depth);
  if (config.keep_conditionals) {
    out.c_lower_.reserve(out.draws_ * depth);
    out.c_upper_.reserve(out.draws_ * depth);
  }

  Rng rng = make_rng(config.seed, {0x67696262ull});
  std::vector<int> z(depth, 1);
  const int total = config.burn_in + config.draws;
  for (int iter = 0; iter < total; ++iter) {
    CountTable counts = out.deterministic_;
    add_memberships(counts, z);
    const Conditionals c = draw_conditionals(hyper, counts, rng);
    z = draw_memberships(c, out.depth_, rng);
    if (iter < config.burn_in) continue;
    out.z_.insert(out.z_.end(), z.begin(), z.end());
    if (config.keep_conditionals) {
      out.c_lower_.insert(out.c_lower_.end(), c.lower.begin(), c.lower.end());
      out.c_upper_.insert(out.c_upper_.end(), c.upper.begin(), c.upper.end());
    }
  }
  return out;
}

const NodeSummary& CdfEstimate::node(NodeIndex index) const {
  const auto i = static_cast<std::size_t>(2 * (index.level - 1) + (index.upper ? 1 : 0));
  return nodes_.at(i);
}

std::vector<double> CdfEstimate::cdf_at_cutpoints() const {
  const std::size_t depth = cutpoints_.size();
  std::vector<double> out(depth);
  // knots_ ascending: index 1 + (depth - m) holds y_m.
  for (std::size_t m = 1; m <= depth; ++m) out[m - 1] = mean_knot_cdf_[1 + depth - m];
  return out;
}

CdfEstimate::Segment CdfEstimate::locate(double x) const {
  const std::size_t last = knots_.size() - 1;
  if (!(x > 0.0)) return {0, 0.0};
  if (x >= knots_[last]) return {last - 1, 1.0};
  // First knot strictly greater than x: x lies in [knots_[s-1], knots_[s]).
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t s = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t left = s - 1;
  const double a = knots_[left];
  const double b = knots_[s];
  double w = 0.0;
  if (options_.interpolation == LeafInterpolation::kBaseMeasure) {
    const double ha = base_.cdf(a);
    const double hb = s == last ? 1.0 : base_.cdf(b);
    w = hb > ha ? (base_.cdf(x) - ha) / (hb - ha) : (x - a) / (b - a);
  } else {
    w = (x - a) / (b - a);
  }
  return {left, w};
}

double CdfEstimate::mean_cdf(double x) const {
  const Segment s = locate(x);
  return (1.0 - s.weight) * mean_knot_cdf_[s.left] + s.weight * mean_knot_cdf_[s.left + 1];
}

void CdfEstimate::cdf_draws(double x, std::vector<double>& out) const {
  out.resize(draws_);
  const Segment s = locate(x);
  const std::size_t depth = cutpoints_.size();
  const std::size_t last = knots_.size() - 1;
  // Knot k in 1..depth maps to column k - 1 of the per-draw matrix.
  auto knot_value = [&](std::size_t t, std::size_t k) {
    if (k == 0) return 0.0;
    if (k == last) return 1.0;
    return draw_knot_cdf_[t * depth + (k - 1)];
  };
  for (std::size_t t = 0; t < draws_; ++t) {
    out[t] = (1.0 - s.weight) * knot_value(t, s.left) + s.weight * knot_value(t, s.left + 1);
  }
}

CdfEstimate estimate_cdf(const GibbsOutput& gibbs, const HyperParams& prior, const Partition& partition,
                         const BaseMeasure& base, const EstimateOptions& options) {
  if (gibbs.draws() < 1) throw std::invalid_argument("posterior summary needs at least one draw");
  if (gibbs.depth() != partition.depth() || prior.depth() != partition.depth()) {
    throw std::invalid_argument("Gibbs output, hyperparameters and partition disagree on depth");
  }
  if (!(options.band_level > 0.0 && options.band_level < 1.0)) {
    throw std::invalid_argument("band level must be in (0, 1)");
  }
  const bool raw_available = gibbs.has_conditionals();
  if (options.band_source == BandSource::kRaw && !raw_available) {
    throw std::invalid_argument("raw-product bands need the Gibbs split draws (keep_conditionals)");
  }

  const auto depth = static_cast<std::size_t>(partition.depth());
  const std::size_t draws = gibbs.draws();

  // Per-draw node masses, row-major draws x (2 * depth) in node order.
  const std::size_t width = 2 * depth;
  std::vector<double> rb(draws * width);
  std::vector<double> raw(raw_available ? draws * width : 0);
  CountTable counts;
  for (std::size_t t = 0; t < draws; ++t) {
    counts = gibbs.deterministic();
    add_memberships(counts, gibbs.memberships(t));
    double rb_path = 1.0;
    double raw_path = 1.0;
    for (std::size_t l = 0; l < depth; ++l) {
      const double a = prior.lower[l] + static_cast<double>(counts.lower[l]);
      const double b = prior.upper[l] + static_cast<double>(counts.upper[l]);
      const double total = a + b;
      const double mean_lower = total > 0.0 ? a / total : 0.5;
      const double mean_upper = total > 0.0 ? b / total : 0.5;
      rb[t * width + 2 * l + 1] = rb_path * mean_upper;
      rb_path *= mean_lower;
      rb[t * width + 2 * l] = rb_path;
      if (raw_available) {
        const auto cl = gibbs.conditional_lower(t);
        const auto cu = gibbs.conditional_upper(t);
        raw[t * width + 2 * l + 1] = raw_path * cu[l];
        raw_path *= cl[l];
        raw[t * width + 2 * l] = raw_path;
      }
    }
  }

  CdfEstimate est(base);
  est.options_ = options;
  est.cutpoints_.assign(partition.cutpoints().begin(), partition.cutpoints().end());
  est.draws_ = draws;

  const double tail = (1.0 - options.band_level) / 2.0;
  const auto all_nodes = partition.nodes();
  est.nodes_.reserve(width);
  std::vector<double> column(draws);
  auto column_stats = [&](const std::vector<double>& source, std::size_t col, double& mean, double& lo,
                          double& hi) {
    double sum = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
      column[t] = source[t * width + col];
      sum += column[t];
    }
    mean = sum / static_cast<double>(draws);
    lo = sample_quantile(column, tail);
    hi = sample_quantile(column, 1.0 - tail);
  };
  for (std::size_t col = 0; col < width; ++col) {
    NodeSummary s;
    s.node = all_nodes[col];
    s.interval = partition.interval(s.node);
    s.prior_mass = base.measure_of(s.interval);
    s.prior_alpha = prior.alpha(s.node);
    column_stats(rb, col, s.posterior_mean, s.rb_lo, s.rb_hi);
    if (raw_available) {
      column_stats(raw, col, s.raw_mean, s.raw_lo, s.raw_hi);
    } else {
      s.raw_mean = s.raw_lo = s.raw_hi = std::numeric_limits<double>::quiet_NaN();
    }
    est.nodes_.push_back(s);
  }

  // CDF knots, ascending.
  const double top = partition.cutpoint(1);
  est.knots_.reserve(depth + 2);
  est.mean_knot_cdf_.reserve(depth + 2);
  est.knots_.push_back(0.0);
  est.mean_knot_cdf_.push_back(0.0);
  for (std::size_t m = depth; m >= 1; --m) {
    est.knots_.push_back(partition.cutpoint(static_cast<int>(m)));
    est.mean_knot_cdf_.push_back(est.nodes_[2 * (m - 1)].posterior_mean);
  }
  // When the data reach past H's support the top leaf collapses onto y_1.
  est.knots_.push_back(std::max(base.support_max(), top));
  est.mean_knot_cdf_.push_back(1.0);

  const std::vector<double>& band = options.band_source == BandSource::kRaw ? raw : rb;
  est.draw_knot_cdf_.resize(draws * depth);
  for (std::size_t t = 0; t < draws; ++t) {
    for (std::size_t k = 1; k <= depth; ++k) {
      // Knot k is y_m with m = depth + 1 - k, the CDF there is the mass of B_{0^m}.
      const std::size_t m = depth + 1 - k;
      est.draw_knot_cdf_[t * depth + (k - 1)] = band[t * width + 2 * (m - 1)];
    }
  }
  return est;
}

void write_posterior_table(std::ostream& out, const CdfEstimate& estimate) {
  const bool raw = estimate.options().band_source == BandSource::kRaw;
  out << "bits,lower,upper,lower_closed,prior_mass,prior_alpha,posterior_mean,posterior_lo,posterior_hi\n";
  for (const auto& n : estimate.nodes()) {
    out << n.node.bits() << ',' << io::fixed(n.interval.lo, 4) << ','
        << (n.interval.bounded() ? io::fixed(n.interval.hi, 4) : std::string("inf")) << ','
        << (n.interval.lo_closed ? 1 : 0) << ',' << io::fixed(n.prior_mass, 8) << ','
        << io::fixed(n.prior_alpha, 8) << ',' << io::fixed(n.posterior_mean, 8) << ','
        << io::fixed(raw ? n.raw_lo : n.rb_lo, 8) << ',' << io::fixed(raw ? n.raw_hi : n.rb_hi, 8) << '\n';
  }
}

}  // namespace ptauction::pt
