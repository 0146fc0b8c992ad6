#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <vector>

#include "oran/e2ap.hpp"
#include "pdu_gen.hpp"

using namespace oran;
using namespace oran::e2ap;

namespace {

std::vector<uint8_t> load_vector(const std::string& name) {
  std::ifstream in("tests/vectors/" + name + ".bin", std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing tests/vectors/", name, ".bin (run from repo root)");
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

GlobalE2NodeId sample_node() {
  GlobalE2NodeId n;
  n.plmn = {0x00, 0xF1, 0x10};  // 001/01
  n.node_type = NodeType::EN_GNB;
  n.node_id = 1;
  return n;
}

}  // namespace

TEST_CASE("golden vector: setup request bytes") {
  E2SetupRequest m;
  m.node = sample_node();
  m.functions.push_back(RanFunctionItem{0, 1, "KPM", {}});

  auto enc = encode_pdu(E2apPdu(m));
  REQUIRE(enc.ok());
  CHECK(*enc == load_vector("setup_request"));

  auto dec = decode_pdu(load_vector("setup_request"));
  REQUIRE(dec.ok());
  REQUIRE(std::holds_alternative<E2SetupRequest>(*dec));
  CHECK(std::get<E2SetupRequest>(*dec) == m);
}

TEST_CASE("golden vector: reset response bytes") {
  auto enc = encode_pdu(E2apPdu(ResetResponse{}));
  REQUIRE(enc.ok());
  CHECK(*enc == load_vector("reset_response"));
  auto dec = decode_pdu(load_vector("reset_response"));
  REQUIRE(dec.ok());
  CHECK(std::holds_alternative<ResetResponse>(*dec));
}

TEST_CASE("golden vector: subscription request bytes") {
  RicSubscriptionRequest m;
  m.request_id = {0xBEEF, 2};
  m.function_id = 1;
  m.event_trigger = {0x00, 0x00, 0x03, 0xE8};
  m.actions.push_back(RicAction{1, ActionType::REPORT, {}});

  auto enc = encode_pdu(E2apPdu(m));
  REQUIRE(enc.ok());
  CHECK(*enc == load_vector("subscription_request"));
  auto dec = decode_pdu(load_vector("subscription_request"));
  REQUIRE(dec.ok());
  CHECK(std::get<RicSubscriptionRequest>(*dec) == m);
}

TEST_CASE("golden vector: indication bytes") {
  RicIndication m;
  m.request_id = {0x0102, 1};
  m.function_id = 0;
  m.action_id = 1;
  m.sequence_number = 7;
  m.header = {0xAA};
  m.message = {0xBB, 0xCC};

  auto enc = encode_pdu(E2apPdu(m));
  REQUIRE(enc.ok());
  CHECK(*enc == load_vector("indication"));
  auto dec = decode_pdu(load_vector("indication"));
  REQUIRE(dec.ok());
  CHECK(std::get<RicIndication>(*dec) == m);
}

TEST_CASE("golden vector: control request bytes") {
  RicControlRequest m;
  m.request_id = {3, 4};
  m.function_id = 1;
  m.header = {0x10};
  m.message = {0x20, 0x21};
  m.ack_requested = true;

  auto enc = encode_pdu(E2apPdu(m));
  REQUIRE(enc.ok());
  CHECK(*enc == load_vector("control_request"));
  auto dec = decode_pdu(load_vector("control_request"));
  REQUIRE(dec.ok());
  CHECK(std::get<RicControlRequest>(*dec) == m);
}

TEST_CASE("roundtrip and canonical re-encode over generated pdus") {
  pdugen::Rng rng(0xC0FFEE);
  for (int i = 0; i < 1500; ++i) {
    E2apPdu pdu = pdugen::random_pdu(rng);
    auto enc = encode_pdu(pdu);
    REQUIRE(enc.ok());
    auto dec = decode_pdu(*enc);
    REQUIRE_MESSAGE(dec.ok(), "case ", i, " (", pdu_name(pdu), "): ", dec.error().detail);
    CHECK(*dec == pdu);
    auto re = encode_pdu(*dec);
    REQUIRE(re.ok());
    CHECK(*re == *enc);  // canonical form: re-encoding is byte identical
  }
}

TEST_CASE("decoder never crashes on arbitrary input") {
  pdugen::Rng rng(0xDEADBEEF);
  int ok_count = 0;
  for (int i = 0; i < 4000; ++i) {
    auto buf = rng.blob(64);
    auto r = decode_pdu(buf);
    if (r.ok()) ++ok_count;  // either outcome fine; just must not crash
  }
  // Mutations of a valid encoding exercise deeper paths.
  auto base = load_vector("setup_request");
  for (int i = 0; i < 4000; ++i) {
    auto buf = base;
    switch (rng.below(3)) {
      case 0: buf[rng.below(static_cast<uint32_t>(buf.size()))] ^= static_cast<uint8_t>(1u << rng.below(8)); break;
      case 1: buf.resize(rng.below(static_cast<uint32_t>(buf.size()) + 1)); break;
      case 2: buf.push_back(static_cast<uint8_t>(rng.next())); break;
    }
    auto r = decode_pdu(buf);
    if (r.ok()) ++ok_count;
  }
  CHECK(ok_count >= 0);
}

TEST_CASE("unknown ie ids are skipped") {
  auto bytes = load_vector("setup_request");
  // Append IE 0xFFFE, length 2 -- not in the registry, must be ignored.
  const uint8_t extra[] = {0xFF, 0xFE, 0x00, 0x02, 0x12, 0x34};
  bytes.insert(bytes.end(), std::begin(extra), std::end(extra));
  auto dec = decode_pdu(bytes);
  REQUIRE(dec.ok());
  auto base = decode_pdu(load_vector("setup_request"));
  REQUIRE(base.ok());
  CHECK(*dec == *base);
}

TEST_CASE("decode error taxonomy") {
  SUBCASE("empty buffer") {
    auto r = decode_pdu(std::span<const uint8_t>{});
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::TruncatedBuffer);
  }
  SUBCASE("unknown pdu tag") {
    const uint8_t b[] = {0x99};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::UnknownPduTag);
  }
  SUBCASE("ie value runs past buffer") {
    const uint8_t b[] = {0x01, 0x00, 0x01, 0x00, 0x08, 0x00};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::TruncatedBuffer);
  }
  SUBCASE("dangling bytes after last ie") {
    const uint8_t b[] = {0x05, 0xFF};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::TrailingGarbage);
  }
  SUBCASE("missing mandatory ie") {
    const uint8_t b[] = {0x01};  // setup request without NodeId
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::MissingMandatoryIe);
  }
  SUBCASE("duplicate singleton ie") {
    // Setup failure with two Cause IEs.
    const uint8_t b[] = {0x03, 0x00, 0x05, 0x00, 0x02, 0x00, 0x00,
                         0x00, 0x05, 0x00, 0x02, 0x00, 0x00};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::InvalidIeValue);
  }
  SUBCASE("node id beyond 20 bits") {
    const uint8_t b[] = {0x01, 0x00, 0x01, 0x00, 0x08, 0x00, 0xF1, 0x10,
                         0x02, 0x00, 0x20, 0x00, 0x00};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::InvalidIeValue);
  }
  SUBCASE("bad ack flag value") {
    const uint8_t b[] = {0x30,
                         0x00, 0x03, 0x00, 0x04, 0x00, 0x00, 0x00, 0x01,
                         0x00, 0x04, 0x00, 0x02, 0x00, 0x00,
                         0x00, 0x0E, 0x00, 0x00,
                         0x00, 0x0F, 0x00, 0x00,
                         0x00, 0x10, 0x00, 0x01, 0x02};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::InvalidIeValue);
  }
  SUBCASE("bad action type") {
    const uint8_t b[] = {0x10,
                         0x00, 0x03, 0x00, 0x04, 0x00, 0x00, 0x00, 0x01,
                         0x00, 0x04, 0x00, 0x02, 0x00, 0x00,
                         0x00, 0x07, 0x00, 0x00,
                         0x00, 0x08, 0x00, 0x04, 0x01, 0x09, 0x00, 0x00};
    auto r = decode_pdu(b);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::InvalidIeValue);
  }
}

TEST_CASE("encode rejects out-of-range fields") {
  SUBCASE("node id") {
    E2SetupRequest m;
    m.node = sample_node();
    m.node.node_id = kMaxNodeId + 1;
    auto r = encode_pdu(E2apPdu(m));
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::OversizeField);
  }
  SUBCASE("sm name too long") {
    E2SetupRequest m;
    m.node = sample_node();
    m.functions.push_back(RanFunctionItem{0, 1, std::string(65, 'n'), {}});
    auto r = encode_pdu(E2apPdu(m));
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::OversizeField);
  }
  SUBCASE("function id too large") {
    RicSubscriptionRequest m;
    m.function_id = kMaxRanFunctionId + 1;
    auto r = encode_pdu(E2apPdu(m));
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::OversizeField);
  }
  SUBCASE("oversized opaque payload") {
    RicIndication m;
    m.message.resize(kMaxOpaqueLen + 1);
    auto r = encode_pdu(E2apPdu(m));
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == ErrCode::OversizeField);
  }
}

TEST_CASE("pdu and action naming") {
  CHECK(std::string(pdu_name(E2apPdu(ResetResponse{}))) == "ResetResponse");
  CHECK(pdu_tag(E2apPdu(RicIndication{})) == tag::kIndication);
  CHECK(std::string(action_type_name(ActionType::CONTROL)) == "CONTROL");
  CHECK(action_type_from_name("POLICY") == ActionType::POLICY);
  CHECK_FALSE(action_type_from_name("report").has_value());
  CHECK(node_key(sample_node()) == "001/01/EN_GNB/1");
}

TEST_CASE("framing encodes length then stream id") {
  auto f0 = frame_write(0, std::span<const uint8_t>{});
  REQUIRE(f0.ok());
  CHECK(*f0 == std::vector<uint8_t>{0, 0, 0, 0, 0});

  const uint8_t payload[] = {0x05};
  auto f1 = frame_write(2, payload);
  REQUIRE(f1.ok());
  CHECK(*f1 == std::vector<uint8_t>{0, 0, 0, 1, 2, 0x05});

  auto r = frame_read(*f1);
  REQUIRE(r.ok());
  CHECK(r->consumed == 6);
  CHECK(r->frame.stream_id == 2);
  CHECK(r->frame.payload == std::vector<uint8_t>{0x05});
}

TEST_CASE("frame reads wait for more input when short") {
  const uint8_t partial[] = {0x00, 0x00, 0x00, 0x02, 0x01, 0xAA};
  auto r = frame_read(partial);  // declared 2 payload bytes, only 1 present
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrCode::TruncatedFrame);
  const uint8_t header_only[] = {0x00, 0x00};
  auto r2 = frame_read(header_only);
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.code() == ErrCode::TruncatedFrame);
}

TEST_CASE("reassembler recovers frames across every split point") {
  std::vector<Frame> frames = {
      Frame{0, {0x05}},
      Frame{1, {}},
      Frame{255, {0x01, 0x02, 0x03}},
  };
  std::vector<uint8_t> wire;
  for (const auto& f : frames) {
    auto enc = frame_write(f.stream_id, f.payload);
    REQUIRE(enc.ok());
    wire.insert(wire.end(), enc->begin(), enc->end());
  }
  for (size_t cut = 0; cut <= wire.size(); ++cut) {
    FrameReassembler ra;
    ra.feed(std::span<const uint8_t>(wire.data(), cut));
    std::vector<Frame> got;
    while (auto f = ra.next()) got.push_back(std::move(*f));
    ra.feed(std::span<const uint8_t>(wire.data() + cut, wire.size() - cut));
    while (auto f = ra.next()) got.push_back(std::move(*f));
    CHECK(got == frames);
    CHECK(ra.buffered() == 0);
  }
}

TEST_CASE("stream id mapping for ran functions") {
  CHECK(stream_for_function(0) == 1);
  CHECK(stream_for_function(1) == 2);
  CHECK(stream_for_function(253) == 254);
  CHECK(stream_for_function(254) == 255);
  CHECK(stream_for_function(255) == 255);
  CHECK(stream_for_function(4095) == 255);
}

TEST_CASE("oversized frame payload is rejected") {
  std::vector<uint8_t> big(kMaxFramePayload + 1);
  auto r = frame_write(0, big);
  REQUIRE_FALSE(r.ok());
  CHECK(r.code() == ErrCode::OversizePayload);
}
