#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oran/config.hpp"
#include "oran/sm_kpm.hpp"
#include "oran/sm_slicing.hpp"
#include "oran/support.hpp"

// Discrete-event simulated RAN: one cell with subframe-granularity capacity,
// UEs with constant offered traffic, and a strict (non-work-conserving) slice
// scheduler doing weighted round-robin over subframes.
namespace oran::sim {

inline constexpr uint32_t kEpochSubframes = 100;  // 100 x 1 ms

// 3GPP FDD bandwidth -> PRB count; returns 0 for unsupported bandwidths.
uint16_t prb_for_bandwidth(double mhz);

struct CellConfig {
  double bandwidth_mhz = 10.0;
  uint16_t n_prb = 50;
  uint64_t capacity_bps = 32'000'000;  // saturated cell throughput per direction

  // Reads cell.bandwidth_mhz / cell.n_prb / cell.capacity_bps; defaults are the
  // 10 MHz profile. n_prb must match the bandwidth mapping.
  static Expected<CellConfig> from_config(const KvConfig& cfg);
};

struct UeConfig {
  uint32_t ue_id = 0;
  uint8_t qci = 9;
  uint64_t offered_ul_bps = 0;
  uint64_t offered_dl_bps = 0;
};

// Reads repeated ue.<id>.{offered_ul_bps, offered_dl_bps, qci} keys; result is
// sorted by ue_id.
Expected<std::vector<UeConfig>> parse_ues(const KvConfig& cfg);

// Per-epoch subframe quotas by the largest-remainder method on
// share_i * epoch_subframes / 100; ties on equal remainders go to the lower
// slice_id. Returns quotas aligned with the input order. Pure.
std::vector<uint32_t> allocate_epoch(const std::vector<slicing::SliceShare>& shares,
                                     uint32_t epoch_subframes);

struct EpochRecord {
  uint64_t start_ms = 0;
  std::vector<std::pair<uint8_t, uint32_t>> quotas;  // (slice_id, subframes), ascending id
};

class RanSim {
 public:
  explicit RanSim(const CellConfig& cell);

  // UEs attach before the clock starts (now_ms() == 0).
  Status add_ue(const UeConfig& ue);

  uint64_t now_ms() const { return now_; }
  const CellConfig& cell() const { return cell_; }

  // Completes the subframe covering [now_ms(), now_ms()+1) and advances the
  // clock. Epoch boundaries (every 100 subframes) recompute quotas first.
  void step_subframe();

  // CreateSlice/BindUe apply immediately; ConfigureShares is stored and
  // activated at the next epoch boundary.
  Status apply_slice_config(const slicing::Control& cmd);

  // Read-only window queries over completed subframes [start_ms, end_ms).
  Expected<kpm::Report> kpm_snapshot(uint64_t start_ms, uint64_t end_ms) const;
  Expected<slicing::Report> slice_snapshot(uint64_t start_ms, uint64_t end_ms) const;

  // Introspection (tests, summaries).
  std::vector<std::pair<uint8_t, uint32_t>> current_quotas() const;
  const std::vector<EpochRecord>& epoch_history() const { return epochs_; }
  uint64_t ue_cum_ul_bytes(uint32_t ue_id) const;
  uint64_t ue_cum_dl_bytes(uint32_t ue_id) const;
  uint64_t slice_cum_dl_bytes(uint8_t slice_id) const;
  size_t slice_count() const { return slices_.size(); }
  bool has_slice(uint8_t slice_id) const;

 private:
  struct Ue {
    UeConfig cfg;
    std::optional<uint8_t> slice_id;
    uint64_t backlog_ul = 0, backlog_dl = 0;
    uint64_t cum_ul = 0, cum_dl = 0;
    uint64_t acc_ul = 0, acc_dl = 0;  // arrival remainders, units of bit-ms
    std::vector<uint64_t> hist_ul{0}, hist_dl{0};  // cumulative bytes at each ms
  };

  struct Slice {
    uint8_t id = 0;
    std::string name;
    uint8_t share_percent = 0;
    uint32_t quota = 0, served = 0;     // within the current epoch
    uint64_t cum_served = 0;            // subframes across all epochs
    uint64_t cum_dl = 0;
    size_t rr_cursor = 0;
    std::vector<uint64_t> hist_served;  // cumulative subframes at each ms
    std::vector<uint64_t> hist_dl;      // cumulative bytes at each ms
  };

  void begin_epoch();
  Slice* pick_serving();
  // Serves the UEs in `members` round-robin within this subframe's budgets;
  // returns bytes moved per direction.
  std::pair<uint64_t, uint64_t> serve(std::vector<size_t>& members, size_t& rr_cursor,
                                      uint64_t budget_dl, uint64_t budget_ul);
  std::vector<size_t> slice_members(uint8_t slice_id) const;
  Status check_window(uint64_t start_ms, uint64_t end_ms) const;

  CellConfig cell_;
  uint64_t now_ = 0;
  std::vector<Ue> ues_;
  std::vector<Slice> slices_;  // ascending id
  std::optional<std::vector<slicing::SliceShare>> pending_shares_;
  std::optional<uint8_t> last_offered_;
  size_t default_rr_ = 0;  // round-robin cursor for the implicit default slice
  uint64_t acc_budget_dl_ = 0, acc_budget_ul_ = 0;
  uint64_t cum_prb_dl_ = 0, cum_prb_ul_ = 0;
  std::vector<uint64_t> hist_prb_dl_{0}, hist_prb_ul_{0};
  std::vector<EpochRecord> epochs_;
};

}  // namespace oran::sim
