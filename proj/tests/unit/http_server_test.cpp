#include "rentbound/http_server.hpp"

#include "http_client.hpp"
#include "test_data.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <thread>

using namespace rentbound;
namespace t = rentbound::testing;
using rentbound::testing::post_request;
using namespace std::chrono_literals;

namespace {

class ServerFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    ServerConfig cfg;
    cfg.port = 0;
    cfg.bind_address = "127.0.0.1";
    cfg.header_timeout = 300ms;
    cfg.body_timeout = 300ms;
    cfg.max_body = 4096;
    log_ = std::make_unique<RequestLog>(sink_);
    server_ = std::make_unique<HttpServer>(cfg, load_ruleset_file(rentbound::testing::sample_ruleset_path()),
                                           log_.get());
    port_ = server_->listen();
    thread_ = std::thread([this] { server_->run(); });
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }
  // Log lines written so far; the server logs after answering, so wait a bit.
  std::vector<RequestRecord> records(std::size_t expected) {
    for (int i = 0; i < 100 && server_->handled() < expected; ++i) std::this_thread::sleep_for(10ms);
    std::vector<RequestRecord> out;
    std::istringstream in(sink_.str());
    std::string line;
    while (std::getline(in, line)) {
      auto r = parse_log_line(line);
      EXPECT_TRUE(r) << line;
      if (r) out.push_back(*r);
    }
    return out;
  }

  std::ostringstream sink_;
  std::unique_ptr<RequestLog> log_;
  std::unique_ptr<HttpServer> server_;
  std::uint16_t port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_F(ServerFixture, AnswersValidPost) {
  auto r = t::exchange(port_, post_request("Language=English&M2_min=76&M2_max=85"));
  ASSERT_TRUE(r.connected);
  EXPECT_EQ(r.status(), 200);
  EXPECT_NE(r.body().find("class=\"rent\""), std::string::npos);
  const auto recs = records(1);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].outcome, Outcome::ok);
  EXPECT_EQ(recs[0].peer, "127.0.0.1");
  EXPECT_EQ(recs[0].language, "English");
  EXPECT_EQ(recs[0].user_agent, "Mozilla/3.0 (X11; I; SunOS 5.5 sun4m)");
  EXPECT_TRUE(recs[0].timestamp);
}

TEST_F(ServerFixture, HeaderTimeout) {
  auto r = t::exchange(port_, "POST / HTTP/1.0\r\nContent-Le", 0ms, 3000ms, false);
  EXPECT_EQ(r.status(), 200);
  const auto recs = records(1);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].outcome, Outcome::timeout_header);
}

TEST_F(ServerFixture, BodyTimeout) {
  auto r = t::exchange(port_, "POST / HTTP/1.0\r\nContent-Length: 50\r\n\r\nM2_min=2", 0ms, 3000ms, false);
  EXPECT_EQ(r.status(), 200);
  const auto recs = records(1);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].outcome, Outcome::timeout_body);
}

TEST_F(ServerFixture, EarlyCloseIsWrongRequest) {
  t::exchange(port_, "POST / HT");
  t::exchange(port_, "");
  const auto recs = records(2);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].outcome, Outcome::wrong_request);
  EXPECT_EQ(recs[1].outcome, Outcome::wrong_request);
}

TEST_F(ServerFixture, OversizeHeaderAndBody) {
  t::exchange(port_, "POST / HTTP/1.0\r\nX: " + std::string(20000, 'a') + "\r\n\r\n");
  auto big = t::exchange(port_, post_request(std::string(5000, 'a')));
  EXPECT_EQ(big.status(), 200);
  const auto recs = records(2);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].outcome, Outcome::wrong_request);
  EXPECT_EQ(recs[1].outcome, Outcome::wrong_request);
  EXPECT_EQ(server_->count(Outcome::wrong_request), 2u);
}

TEST_F(ServerFixture, SyntaxErrorLogged) {
  t::exchange(port_, post_request("ZI_min=1.5"));
  const auto recs = records(1);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].outcome, Outcome::syntax_error);
}

TEST(HttpServerConfig, Validation) {
  ServerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.header_timeout = 0ms;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  ServerConfig body;
  body.max_body = 0;
  EXPECT_THROW(body.validate(), std::invalid_argument);
}

TEST(HttpServerConfig, BindFailure) {
  ServerConfig cfg;
  cfg.port = 0;
  cfg.bind_address = "not-an-address";
  HttpServer s(cfg, load_ruleset_file(rentbound::testing::sample_ruleset_path()), nullptr);
  EXPECT_THROW(s.listen(), ServerError);
}
