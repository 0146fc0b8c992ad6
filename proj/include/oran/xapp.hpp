#pragma once

#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oran/config.hpp"
#include "oran/e2ap.hpp"
#include "oran/proclog.hpp"
#include "oran/sm_kpm.hpp"
#include "oran/sm_slicing.hpp"
#include "oran/transport.hpp"
#include "oran/xapp_proto.hpp"

// The two bundled xApps: kpimon (REPORT consumer over the KPM function) and
// slicing (CONTROL producer plus REPORT consumer over the slicing function),
// with the descriptor-file onboarding mechanism they share.
namespace oran::xapp {

// --- Descriptors ------------------------------------------------------------

// Onboarding manifest: which service models the app consumes and which action
// types it produces. Flat key=value file, lists comma-separated.
struct XappDescriptor {
  std::string xapp_name;
  std::vector<std::string> consumes;          // SM names
  std::vector<e2ap::ActionType> produces;
  std::string version = "0";

  bool operator==(const XappDescriptor&) const = default;
};

Expected<XappDescriptor> parse_descriptor(const KvConfig& cfg);
Expected<XappDescriptor> load_descriptor(const std::string& path);

// --- Metric persistence -----------------------------------------------------

// One CSV row. `key` carries the QCI or slice id as decimal text, or stays
// empty for cell-wide metrics.
struct MetricRow {
  uint64_t t_ms = 0;
  uint32_t node_id = 0;
  std::string container;
  std::string metric;
  std::string key;
  uint64_t value = 0;

  bool operator==(const MetricRow&) const = default;
};

inline constexpr const char* kMetricsCsvHeader = "t_ms,node_id,container,metric,key,value";

std::string to_csv_line(const MetricRow& row);
Status write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows);

// --- Common client plumbing -------------------------------------------------

// Shared client loop: connect, register, then hand registered-phase traffic to
// the derived app. Indications arrive on the same link as verbatim E2AP
// frames and are dispatched separately from control-plane replies.
class XappBase : public net::Handler {
 public:
  XappBase(std::string ric_addr, XappDescriptor desc);
  ~XappBase() override = default;

  // Validates, opens outputs, and connects. Derived classes extend it.
  virtual Status start(net::Services& svc);

  void on_connected(net::ConnId c) override;
  void on_frame(net::ConnId c, const e2ap::Frame& f) override;
  void on_closed(net::ConnId c) override;

  const XappDescriptor& descriptor() const { return desc_; }
  bool registered() const { return registered_; }
  bool link_up() const { return link_up_; }
  // Unrecoverable application-level failure (no usable node, subscription
  // rejected); distinct from the link dropping.
  bool failed() const { return failed_; }
  const std::string& failure_reason() const { return failure_reason_; }
  bool transport_lost() const { return transport_lost_; }
  uint64_t decode_warnings() const { return decode_warnings_; }
  ProcLog& proc_log() { return log_; }

  const std::vector<MetricRow>& rows() const { return rows_; }

 protected:
  // Called once the controller acknowledged registration.
  virtual void on_registered() = 0;
  virtual void on_message(const XappPdu& pdu) = 0;
  virtual void on_indication(const e2ap::RicIndication& ind) = 0;

  void send(const XappPdu& pdu);
  void fail(std::string reason);
  bool failed_or_down() const { return failed_ || !link_up_; }
  void append_row(MetricRow row);
  // Opens (truncating) the CSV sink and writes the header row.
  Status open_csv(const std::string& path);

  net::Services* svc_ = nullptr;
  net::ConnId conn_ = 0;
  uint64_t decode_warnings_ = 0;
  ProcLog log_;

 private:
  std::string ric_addr_;
  XappDescriptor desc_;
  bool registered_ = false;
  bool link_up_ = false;
  bool failed_ = false;
  bool transport_lost_ = false;
  std::string failure_reason_;
  std::vector<MetricRow> rows_;
  std::ofstream csv_;
};

// --- kpimon -----------------------------------------------------------------

struct KpimonConfig {
  std::string ric_addr = "mem://ric-xapp";
  uint32_t period_ms = 1000;
  std::string out_csv;  // empty: keep rows in memory only

  // Reads xapp.ric_addr / kpimon.period_ms / kpimon.out_csv.
  static Expected<KpimonConfig> from_config(const KvConfig& cfg);
};

// KPI monitor: subscribes to the KPM function on every connected node that
// exposes it and flattens each indication into CSV rows. Cumulative byte
// counters additionally produce per-period "_delta" rows.
class KpimonApp : public XappBase {
 public:
  KpimonApp(KpimonConfig cfg, XappDescriptor desc);

  static Status check_descriptor(const XappDescriptor& desc);

  Status start(net::Services& svc) override;

  uint64_t reports_received() const { return reports_received_; }
  size_t subscriptions_active() const { return active_; }

 protected:
  void on_registered() override;
  void on_message(const XappPdu& pdu) override;
  void on_indication(const e2ap::RicIndication& ind) override;

 private:
  KpimonConfig cfg_;
  size_t pending_ = 0;
  size_t active_ = 0;
  uint64_t reports_received_ = 0;
  // Previous report's session stats per node, for the delta rows.
  std::map<uint32_t, std::vector<kpm::QciStat>> prev_stats_;
};

// --- slicing ----------------------------------------------------------------

// One timed reconfiguration: at `at_s` into the run, set these shares.
struct SharePoint {
  uint32_t at_s = 0;
  std::vector<slicing::SliceShare> shares;

  bool operator==(const SharePoint&) const = default;
};

// The whole experiment plan: slices to create, UE bindings, and the timed
// share schedule.
struct SliceSchedule {
  std::vector<slicing::CreateSlice> slices;
  std::vector<slicing::BindUe> bindings;
  std::vector<SharePoint> points;

  bool operator==(const SliceSchedule&) const = default;
};

Status validate_schedule(const SliceSchedule& sched);

struct SlicingConfig {
  std::string ric_addr = "mem://ric-xapp";
  uint32_t report_period_ms = 1000;
  std::string out_csv;
  SliceSchedule schedule;

  // Reads xapp.ric_addr / slicing.report_period_ms / slicing.out_csv plus the
  // schedule keys slicing.slice.<id>.name, slicing.bind.<ue_id>,
  // slicing.share.<at_s>.
  static Expected<SlicingConfig> from_config(const KvConfig& cfg);
};

// Slice controller: creates slices and binds UEs up front, subscribes to the
// slicing reports, and pushes the share schedule as acknowledged CONTROL
// messages at their scheduled times. A failed control is retried once and then
// recorded; the run continues.
class SlicingApp : public XappBase {
 public:
  SlicingApp(SlicingConfig cfg, XappDescriptor desc);

  static Status check_descriptor(const XappDescriptor& desc);

  Status start(net::Services& svc) override;

  uint64_t reports_received() const { return reports_received_; }
  uint64_t acks_received() const { return acks_; }
  uint64_t control_failures() const { return control_failures_; }  // after retry
  uint64_t retries_used() const { return retries_; }
  // Schedule point index -> t_ms at which its ConfigureShares was acknowledged.
  const std::map<size_t, uint64_t>& share_ack_times() const { return share_ack_times_; }
  bool subscribed() const { return subscribed_; }

 protected:
  void on_registered() override;
  void on_message(const XappPdu& pdu) override;
  void on_indication(const e2ap::RicIndication& ind) override;

 private:
  struct OutstandingControl {
    slicing::Control cmd;
    std::string what;
    bool retried = false;
    // Index into the schedule's points when this is a timed share push.
    std::optional<size_t> point_index;
  };

  void send_control(OutstandingControl oc);
  void arm_point_timers();
  void fire_point(size_t index);

  SlicingConfig cfg_;
  std::optional<e2ap::GlobalE2NodeId> node_;
  std::deque<OutstandingControl> outstanding_;
  bool subscribed_ = false;
  uint64_t reports_received_ = 0;
  uint64_t acks_ = 0;
  uint64_t control_failures_ = 0;
  uint64_t retries_ = 0;
  std::map<size_t, uint64_t> share_ack_times_;
};

}  // namespace oran::xapp
