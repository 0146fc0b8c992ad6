#include "oran/ran_sim.hpp"

#include <algorithm>
#include <numeric>

namespace oran::sim {

uint16_t prb_for_bandwidth(double mhz) {
  switch (static_cast<int>(mhz * 10 + 0.5)) {
    case 14: return 6;
    case 30: return 15;
    case 50: return 25;
    case 100: return 50;
    case 150: return 75;
    case 200: return 100;
    default: return 0;
  }
}

Expected<CellConfig> CellConfig::from_config(const KvConfig& cfg) {
  CellConfig c;
  c.bandwidth_mhz = cfg.get_double_or("cell.bandwidth_mhz", 10.0);
  uint16_t mapped = prb_for_bandwidth(c.bandwidth_mhz);
  if (mapped == 0)
    return Error{ErrCode::ConfigError,
                 "cell.bandwidth_mhz must be one of 1.4, 3, 5, 10, 15, 20"};
  c.n_prb = static_cast<uint16_t>(cfg.get_u64_or("cell.n_prb", mapped));
  if (c.n_prb != mapped)
    return Error{ErrCode::ConfigError, "cell.n_prb " + std::to_string(c.n_prb) +
                                           " does not match bandwidth (expect " +
                                           std::to_string(mapped) + ")"};
  // Default saturated throughput scales with the PRB grid from the 10 MHz
  // profile's 32 Mbps.
  uint64_t default_cap = 32'000'000ull * c.n_prb / 50;
  c.capacity_bps = cfg.get_u64_or("cell.capacity_bps", default_cap);
  if (c.capacity_bps == 0) return Error{ErrCode::ConfigError, "cell.capacity_bps must be > 0"};
  return c;
}

Expected<std::vector<UeConfig>> parse_ues(const KvConfig& cfg) {
  std::vector<UeConfig> out;
  for (const auto& key : cfg.keys_with_prefix("ue.")) {
    auto parts = split(key, '.');
    if (parts.size() != 3) return Error{ErrCode::ConfigError, "bad ue key: " + key};
    uint32_t id = 0;
    try {
      id = static_cast<uint32_t>(std::stoul(parts[1]));
    } catch (...) {
      return Error{ErrCode::ConfigError, "bad ue id in key: " + key};
    }
    if (std::find_if(out.begin(), out.end(), [&](const UeConfig& u) { return u.ue_id == id; }) ==
        out.end())
      out.push_back(UeConfig{id, 9, 0, 0});
  }
  for (auto& ue : out) {
    std::string p = "ue." + std::to_string(ue.ue_id) + ".";
    ue.offered_ul_bps = cfg.get_u64_or(p + "offered_ul_bps", 0);
    ue.offered_dl_bps = cfg.get_u64_or(p + "offered_dl_bps", 0);
    uint64_t qci = cfg.get_u64_or(p + "qci", 9);
    if (qci == 0 || qci > 255)
      return Error{ErrCode::ConfigError, p + "qci out of range"};
    ue.qci = static_cast<uint8_t>(qci);
  }
  std::sort(out.begin(), out.end(),
            [](const UeConfig& a, const UeConfig& b) { return a.ue_id < b.ue_id; });
  return out;
}

std::vector<uint32_t> allocate_epoch(const std::vector<slicing::SliceShare>& shares,
                                     uint32_t epoch_subframes) {
  size_t n = shares.size();
  std::vector<uint32_t> quota(n, 0);
  std::vector<uint32_t> rem(n, 0);
  uint64_t total_num = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t num = static_cast<uint64_t>(shares[i].share_percent) * epoch_subframes;
    quota[i] = static_cast<uint32_t>(num / 100);
    rem[i] = static_cast<uint32_t>(num % 100);
    total_num += num;
  }
  uint32_t target = static_cast<uint32_t>(total_num / 100);
  uint32_t assigned = std::accumulate(quota.begin(), quota.end(), 0u);
  // Hand out the leftover subframes to the largest remainders, lower slice_id
  // first on ties.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (rem[a] != rem[b]) return rem[a] > rem[b];
    return shares[a].slice_id < shares[b].slice_id;
  });
  for (size_t k = 0; k < order.size() && assigned < target; ++k) {
    if (rem[order[k]] == 0) break;
    ++quota[order[k]];
    ++assigned;
  }
  return quota;
}

RanSim::RanSim(const CellConfig& cell) : cell_(cell) {}

Status RanSim::add_ue(const UeConfig& ue) {
  if (now_ != 0) return Error{ErrCode::ConfigError, "UEs attach before the clock starts"};
  for (const auto& u : ues_)
    if (u.cfg.ue_id == ue.ue_id)
      return Error{ErrCode::ConfigError, "duplicate ue id " + std::to_string(ue.ue_id)};
  Ue u;
  u.cfg = ue;
  ues_.push_back(std::move(u));
  std::sort(ues_.begin(), ues_.end(),
            [](const Ue& a, const Ue& b) { return a.cfg.ue_id < b.cfg.ue_id; });
  return ok_status();
}

bool RanSim::has_slice(uint8_t slice_id) const {
  return std::any_of(slices_.begin(), slices_.end(),
                     [&](const Slice& s) { return s.id == slice_id; });
}

Status RanSim::apply_slice_config(const slicing::Control& cmd) {
  if (const auto* cs = std::get_if<slicing::CreateSlice>(&cmd)) {
    if (has_slice(cs->slice_id))
      return Error{ErrCode::DuplicateSliceId,
                   "slice " + std::to_string(cs->slice_id) + " already exists"};
    Slice s;
    s.id = cs->slice_id;
    s.name = cs->name;
    s.hist_served.assign(now_ + 1, 0);
    s.hist_dl.assign(now_ + 1, 0);
    slices_.push_back(std::move(s));
    std::sort(slices_.begin(), slices_.end(),
              [](const Slice& a, const Slice& b) { return a.id < b.id; });
    return ok_status();
  }
  if (const auto* b = std::get_if<slicing::BindUe>(&cmd)) {
    if (!has_slice(b->slice_id))
      return Error{ErrCode::UnknownSlice, "slice " + std::to_string(b->slice_id) + " not created"};
    auto it = std::find_if(ues_.begin(), ues_.end(),
                           [&](const Ue& u) { return u.cfg.ue_id == b->ue_id; });
    if (it == ues_.end())
      return Error{ErrCode::UnknownUe, "ue " + std::to_string(b->ue_id) + " not attached"};
    it->slice_id = b->slice_id;
    return ok_status();
  }
  const auto& cfg = std::get<slicing::ConfigureShares>(cmd);
  if (auto s = slicing::validate_shares(cfg.shares); !s.ok()) return s;
  for (const auto& sh : cfg.shares) {
    if (!has_slice(sh.slice_id))
      return Error{ErrCode::UnknownSlice, "slice " + std::to_string(sh.slice_id) + " not created"};
  }
  pending_shares_ = cfg.shares;
  return ok_status();
}

void RanSim::begin_epoch() {
  if (pending_shares_) {
    // A ConfigureShares message is the full allocation: unmentioned slices
    // drop to share 0.
    for (auto& s : slices_) s.share_percent = 0;
    for (const auto& sh : *pending_shares_) {
      auto it = std::find_if(slices_.begin(), slices_.end(),
                             [&](const Slice& s) { return s.id == sh.slice_id; });
      if (it != slices_.end()) it->share_percent = sh.share_percent;
    }
    pending_shares_.reset();
  }
  std::vector<slicing::SliceShare> shares;
  shares.reserve(slices_.size());
  for (const auto& s : slices_) shares.push_back({s.id, s.share_percent});
  auto quotas = allocate_epoch(shares, kEpochSubframes);
  EpochRecord rec;
  rec.start_ms = now_;
  for (size_t i = 0; i < slices_.size(); ++i) {
    slices_[i].quota = quotas[i];
    slices_[i].served = 0;
    rec.quotas.emplace_back(slices_[i].id, quotas[i]);
  }
  epochs_.push_back(std::move(rec));
}

RanSim::Slice* RanSim::pick_serving() {
  // Next candidate in ascending-slice_id cyclic order, starting strictly after
  // the slice offered the previous subframe.
  Slice* first = nullptr;
  Slice* after = nullptr;
  for (auto& s : slices_) {
    if (s.served >= s.quota) continue;
    if (!first) first = &s;
    if (last_offered_ && s.id > *last_offered_ && !after) after = &s;
  }
  return after ? after : first;
}

std::vector<size_t> RanSim::slice_members(uint8_t slice_id) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < ues_.size(); ++i)
    if (ues_[i].slice_id && *ues_[i].slice_id == slice_id) out.push_back(i);
  return out;
}

std::pair<uint64_t, uint64_t> RanSim::serve(std::vector<size_t>& members, size_t& rr_cursor,
                                            uint64_t budget_dl, uint64_t budget_ul) {
  uint64_t moved_dl = 0, moved_ul = 0;
  if (members.empty()) return {0, 0};
  size_t n = members.size();
  size_t start = rr_cursor % n;
  for (size_t k = 0; k < n && (budget_dl > moved_dl || budget_ul > moved_ul); ++k) {
    Ue& ue = ues_[members[(start + k) % n]];
    uint64_t dl = std::min(ue.backlog_dl, budget_dl - moved_dl);
    uint64_t ul = std::min(ue.backlog_ul, budget_ul - moved_ul);
    ue.backlog_dl -= dl;
    ue.backlog_ul -= ul;
    ue.cum_dl += dl;
    ue.cum_ul += ul;
    moved_dl += dl;
    moved_ul += ul;
  }
  rr_cursor = (start + 1) % n;
  return {moved_dl, moved_ul};
}

void RanSim::step_subframe() {
  if (now_ % kEpochSubframes == 0) begin_epoch();

  // (a) traffic arrival
  for (auto& ue : ues_) {
    ue.acc_ul += ue.cfg.offered_ul_bps;
    ue.backlog_ul += ue.acc_ul / 8000;
    ue.acc_ul %= 8000;
    ue.acc_dl += ue.cfg.offered_dl_bps;
    ue.backlog_dl += ue.acc_dl / 8000;
    ue.acc_dl %= 8000;
  }

  // (b) per-subframe capacity budget, one subframe = 1 ms
  acc_budget_dl_ += cell_.capacity_bps;
  uint64_t budget_dl = acc_budget_dl_ / 8000;
  acc_budget_dl_ %= 8000;
  acc_budget_ul_ += cell_.capacity_bps;
  uint64_t budget_ul = acc_budget_ul_ / 8000;
  acc_budget_ul_ %= 8000;

  // (c) serve: explicit slices when any exist, else the implicit default slice
  uint64_t moved_dl = 0, moved_ul = 0;
  if (slices_.empty()) {
    std::vector<size_t> everyone(ues_.size());
    std::iota(everyone.begin(), everyone.end(), 0);
    bool backlog = std::any_of(ues_.begin(), ues_.end(), [](const Ue& u) {
      return u.backlog_dl > 0 || u.backlog_ul > 0;
    });
    if (backlog) std::tie(moved_dl, moved_ul) = serve(everyone, default_rr_, budget_dl, budget_ul);
  } else if (Slice* sv = pick_serving()) {
    last_offered_ = sv->id;
    auto members = slice_members(sv->id);
    bool backlog = std::any_of(members.begin(), members.end(), [&](size_t i) {
      return ues_[i].backlog_dl > 0 || ues_[i].backlog_ul > 0;
    });
    if (backlog) {
      // The offer only consumes quota when the slice has traffic to move.
      sv->served += 1;
      sv->cum_served += 1;
      std::tie(moved_dl, moved_ul) = serve(members, sv->rr_cursor, budget_dl, budget_ul);
      sv->cum_dl += moved_dl;
    }
  }

  // (d) PRB usage for this subframe: ceil(n_prb * served / budget)
  if (budget_dl > 0 && moved_dl > 0)
    cum_prb_dl_ += (static_cast<uint64_t>(cell_.n_prb) * moved_dl + budget_dl - 1) / budget_dl;
  if (budget_ul > 0 && moved_ul > 0)
    cum_prb_ul_ += (static_cast<uint64_t>(cell_.n_prb) * moved_ul + budget_ul - 1) / budget_ul;

  now_ += 1;
  hist_prb_dl_.push_back(cum_prb_dl_);
  hist_prb_ul_.push_back(cum_prb_ul_);
  for (auto& ue : ues_) {
    ue.hist_ul.push_back(ue.cum_ul);
    ue.hist_dl.push_back(ue.cum_dl);
  }
  for (auto& s : slices_) {
    s.hist_served.push_back(s.cum_served);
    s.hist_dl.push_back(s.cum_dl);
  }
}

Status RanSim::check_window(uint64_t start_ms, uint64_t end_ms) const {
  if (end_ms < start_ms)
    return Error{ErrCode::InvalidWindow, "window end before start"};
  if (end_ms > now_)
    return Error{ErrCode::InvalidWindow, "window end beyond simulated time"};
  return ok_status();
}

namespace {
// Round-half-up integer average.
uint64_t avg_half_up(uint64_t total, uint64_t count) {
  if (count == 0) return 0;
  return (total + count / 2) / count;
}
}  // namespace

Expected<kpm::Report> RanSim::kpm_snapshot(uint64_t start_ms, uint64_t end_ms) const {
  if (auto s = check_window(start_ms, end_ms); !s.ok()) return s.error();
  uint64_t n = end_ms - start_ms;

  kpm::OduMetrics odu;
  odu.prb_available = cell_.n_prb;
  odu.prb_used_dl = static_cast<uint16_t>(
      avg_half_up(hist_prb_dl_[end_ms] - hist_prb_dl_[start_ms], n));
  odu.prb_used_ul = static_cast<uint16_t>(
      avg_half_up(hist_prb_ul_[end_ms] - hist_prb_ul_[start_ms], n));

  kpm::OcuCpMetrics cp;
  kpm::OcuUpMetrics up;
  for (const auto& ue : ues_) {
    bool offered = ue.cfg.offered_ul_bps > 0 || ue.cfg.offered_dl_bps > 0;
    bool moved = (ue.hist_ul[end_ms] - ue.hist_ul[start_ms]) > 0 ||
                 (ue.hist_dl[end_ms] - ue.hist_dl[start_ms]) > 0;
    bool backlogged = ue.backlog_ul > 0 || ue.backlog_dl > 0;
    if (offered || moved || backlogged) cp.active_ues += 1;
    up.stats.push_back(kpm::QciStat{ue.cfg.qci, ue.hist_dl[end_ms], ue.hist_ul[end_ms]});
  }

  kpm::Report rep;
  rep.containers.push_back(kpm::Container{1, odu});
  rep.containers.push_back(kpm::Container{2, cp});
  rep.containers.push_back(kpm::Container{3, std::move(up)});
  return rep;
}

Expected<slicing::Report> RanSim::slice_snapshot(uint64_t start_ms, uint64_t end_ms) const {
  if (auto s = check_window(start_ms, end_ms); !s.ok()) return s.error();
  uint64_t n = end_ms - start_ms;
  slicing::Report rep;
  for (const auto& s : slices_) {
    // A slice created mid-run has no history before its creation: count 0.
    auto at = [](const std::vector<uint64_t>& hist, uint64_t t) -> uint64_t {
      return t < hist.size() ? hist[t] : (hist.empty() ? 0 : hist.back());
    };
    uint64_t dl0 = at(s.hist_dl, start_ms), dl1 = at(s.hist_dl, end_ms);
    uint64_t sf0 = at(s.hist_served, start_ms), sf1 = at(s.hist_served, end_ms);
    slicing::SliceRecord rec;
    rec.slice_id = s.id;
    rec.subframes_allocated = static_cast<uint32_t>(sf1 - sf0);
    rec.cum_dl_bytes = dl1;
    rec.throughput_bps = n == 0 ? 0 : ((dl1 - dl0) * 8000 + n / 2) / n;
    rep.records.push_back(rec);
  }
  return rep;
}

std::vector<std::pair<uint8_t, uint32_t>> RanSim::current_quotas() const {
  std::vector<std::pair<uint8_t, uint32_t>> out;
  for (const auto& s : slices_) out.emplace_back(s.id, s.quota);
  return out;
}

uint64_t RanSim::ue_cum_ul_bytes(uint32_t ue_id) const {
  for (const auto& u : ues_)
    if (u.cfg.ue_id == ue_id) return u.cum_ul;
  return 0;
}

uint64_t RanSim::ue_cum_dl_bytes(uint32_t ue_id) const {
  for (const auto& u : ues_)
    if (u.cfg.ue_id == ue_id) return u.cum_dl;
  return 0;
}

uint64_t RanSim::slice_cum_dl_bytes(uint8_t slice_id) const {
  for (const auto& s : slices_)
    if (s.id == slice_id) return s.cum_dl;
  return 0;
}

}  // namespace oran::sim
