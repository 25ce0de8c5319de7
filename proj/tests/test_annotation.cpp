#include "support.hpp"

#include "mcu/annotation_service.hpp"
#include "mcu/strings.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <set>
#include <thread>

using namespace mcu;
using namespace mcu::annot;
using json = nlohmann::json;

namespace {

json comparison_body(const std::string& task, const std::string& a, const std::string& b, const std::string& rater,
                     const std::string& verdict = "A-better") {
  json v = json::object();
  for (auto d : eval::kDimensions) v[std::string(eval::to_string(d))] = verdict;
  json j{{"task", task}, {"trajectories", {a, b}}, {"verdicts", v}};
  if (!rater.empty()) j["rater"] = rater;
  return j;
}

json rating_body(const std::string& task, const std::string& id, const std::string& rater, double anchor) {
  json v = json::object();
  for (auto d : eval::kDimensions) v[std::string(eval::to_string(d))] = anchor;
  return {{"task", task}, {"trajectories", {id}}, {"anchors", v}, {"rater", rater}};
}

class Service : public ::testing::Test {
protected:
  void SetUp() override {
    auto root = tmp.str("trajs");
    test::write_fake_trajectory(root + "/p1", "p1", "build a pillar", 65);
    test::write_fake_trajectory(root + "/p2", "p2", "build a pillar", 10);
    test::write_fake_trajectory(root + "/p3", "p3", "build a pillar", 10);
    test::write_fake_trajectory(root + "/s1", "s1", "hunt sheep", 5);
    svc = std::make_unique<AnnotationService>(ServiceConfig{root, tmp.str("export.jsonl"), 7, 30});
    port = svc->start();
    cli = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  httplib::Result post(const std::string& path, const json& body) {
    return cli->Post(path, body.dump(), "application/json");
  }

  test::TempDir tmp;
  std::unique_ptr<AnnotationService> svc;
  std::unique_ptr<httplib::Client> cli;
  int port = 0;
};

} // namespace

TEST_F(Service, ListsTasks) {
  auto res = cli->Get("/tasks");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto j = json::parse(res->body);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["task"], "build a pillar");
  EXPECT_EQ(j[0]["pairs"], 3);
  EXPECT_EQ(j[0]["trajectories"], json({"p1", "p2", "p3"}));
}

TEST_F(Service, ValidComparisonIsStoredAndExported) {
  auto res = post("/annotations", comparison_body("build a pillar", "p2", "p1", "alice", "B-better"));
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  auto stored = json::parse(res->body);
  EXPECT_GT(stored["timestamp"].get<long>(), 0);
  auto exp = cli->Get("/annotations");
  ASSERT_TRUE(exp);
  auto records = align::parse_annotations(exp->body);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].rater, "alice");
  EXPECT_EQ(records[0].verdicts[0], eval::Verdict::BBetter);
  EXPECT_EQ(align::load_annotations(tmp.str("export.jsonl")), records);
}

TEST_F(Service, SchemaViolationsAre400) {
  auto no_rater = post("/annotations", comparison_body("build a pillar", "p1", "p2", ""));
  ASSERT_TRUE(no_rater);
  EXPECT_EQ(no_rater->status, 400);
  EXPECT_NE(no_rater->body.find("rater"), std::string::npos);

  auto bad_verdict = post("/annotations", comparison_body("build a pillar", "p1", "p2", "bob", "A-much-better"));
  EXPECT_EQ(bad_verdict->status, 400);
  auto not_json = cli->Post("/annotations", "{", "application/json");
  EXPECT_EQ(not_json->status, 400);
  auto wrong_kind = post("/annotations", rating_body("build a pillar", "p1", "bob", 0.5));
  EXPECT_EQ(wrong_kind->status, 400);
  auto bad_anchor = post("/ratings", rating_body("build a pillar", "p1", "bob", 0.3));
  EXPECT_EQ(bad_anchor->status, 400);
  auto cross_task = post("/annotations", comparison_body("build a pillar", "p1", "s1", "bob"));
  EXPECT_EQ(cross_task->status, 400);
  EXPECT_TRUE(align::parse_annotations(cli->Get("/annotations")->body).empty());
}

TEST_F(Service, UnknownIdsAre404) {
  EXPECT_EQ(post("/annotations", comparison_body("build a pillar", "p1", "zz", "bob"))->status, 404);
  EXPECT_EQ(cli->Get("/trajectories/zz/frames")->status, 404);
  EXPECT_EQ(cli->Get("/trajectories/p1/frames/000999.png")->status, 404);
  EXPECT_EQ(cli->Get("/trajectories/zz/video")->status, 404);
  EXPECT_EQ(cli->Get("/pairs/next?task=nope&rater=a")->status, 404);
}

TEST_F(Service, DuplicateSubmissionIs409EvenWhenSwapped) {
  EXPECT_EQ(post("/annotations", comparison_body("build a pillar", "p1", "p2", "carol"))->status, 201);
  EXPECT_EQ(post("/annotations", comparison_body("build a pillar", "p2", "p1", "carol"))->status, 409);
  EXPECT_EQ(post("/annotations", comparison_body("build a pillar", "p1", "p2", "dave"))->status, 201);
  EXPECT_EQ(post("/ratings", rating_body("build a pillar", "p1", "carol", 0.5))->status, 201);
  EXPECT_EQ(post("/ratings", rating_body("build a pillar", "p1", "carol", 0.75))->status, 409);
}

TEST_F(Service, NextPairUntilExhaustedThen204) {
  std::set<std::pair<std::string, std::string>> seen;
  for (int i = 0; i < 3; ++i) {
    auto res = cli->Get("/pairs/next?task=build%20a%20pillar&rater=erin");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
    auto j = json::parse(res->body);
    auto a = j["a"].get<std::string>(), b = j["b"].get<std::string>();
    EXPECT_TRUE(seen.insert({std::min(a, b), std::max(a, b)}).second);
    EXPECT_EQ(post("/annotations", comparison_body("build a pillar", a, b, "erin", "tie"))->status, 201);
  }
  EXPECT_EQ(cli->Get("/pairs/next?task=build%20a%20pillar&rater=erin")->status, 204);
  EXPECT_EQ(cli->Get("/pairs/next?task=build%20a%20pillar&rater=frank")->status, 200);
  EXPECT_EQ(cli->Get("/pairs/next?task=hunt%20sheep&rater=frank")->status, 204);
}

TEST_F(Service, FramesFollowStrideAndServePng) {
  auto res = cli->Get("/trajectories/p1/frames");
  ASSERT_TRUE(res);
  auto j = json::parse(res->body);
  EXPECT_EQ(j["frame_count"], 65);
  ASSERT_EQ(j["frames"].size(), 3u);
  auto url = j["frames"][2]["url"].get<std::string>();
  EXPECT_EQ(url, "/trajectories/p1/frames/000060.png");
  auto png = cli->Get(url);
  ASSERT_TRUE(png);
  EXPECT_EQ(png->status, 200);
  EXPECT_EQ(png->get_header_value("Content-Type"), "image/png");
  EXPECT_EQ(png->body.substr(1, 3), "PNG");
}

TEST_F(Service, VideoIsServedWhenPresent) {
  str::write_file(tmp.str("trajs/p2/video.mp4"), "fakevideo");
  auto res = cli->Get("/trajectories/p2/video");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "fakevideo");
  EXPECT_EQ(res->get_header_value("Content-Type"), "video/mp4");
}

TEST_F(Service, ConcurrentRatersExportTotallyOrdered) {
  std::vector<std::thread> ts;
  for (int r = 0; r < 6; ++r)
    ts.emplace_back([this, r] {
      httplib::Client c("127.0.0.1", port);
      auto rater = "r" + std::to_string(r);
      for (auto [a, b] : {std::pair{"p1", "p2"}, {"p1", "p3"}, {"p2", "p3"}})
        EXPECT_EQ(c.Post("/annotations", comparison_body("build a pillar", a, b, rater).dump(), "application/json")
                      ->status,
                  201);
    });
  for (auto& t : ts) t.join();
  auto records = align::parse_annotations(cli->Get("/annotations")->body);
  ASSERT_EQ(records.size(), 18u);
  for (std::size_t i = 1; i < records.size(); ++i) EXPECT_LT(records[i - 1].timestamp, records[i].timestamp);
  EXPECT_EQ(align::load_annotations(tmp.str("export.jsonl")).size(), 18u);
}

TEST_F(Service, ExportFeedsAlignment) {
  for (auto rater : {"x", "y", "z"}) {
    post("/annotations", comparison_body("build a pillar", "p1", "p2", rater, "A-better"));
    post("/annotations", comparison_body("build a pillar", "p3", "p1", rater, "B-better"));
  }
  auto records = align::parse_annotations(cli->Get("/annotations")->body);
  auto decided = align::filter_decided_pairs(records);
  ASSERT_EQ(decided.size(), 2u);
  for (const auto& d : decided) EXPECT_EQ(d.votes, 3);
  align::AutoComparison c{"build a pillar", "p1", "p2", {}};
  c.result.verdicts.fill(eval::Verdict::ABetter);
  align::AutoComparison c2{"build a pillar", "p1", "p3", {}};
  c2.result.verdicts.fill(eval::Verdict::ABetter);
  auto rep = align::alignment_report(records, {c, c2}, {});
  EXPECT_DOUBLE_EQ(rep.per_dimension[0].macro, 1.0);
  EXPECT_EQ(rep.decided_pairs[0], 2u);
}

TEST(Store, ReloadsAndKeepsIncreasingTimestamps) {
  test::TempDir tmp;
  align::AnnotationRecord r;
  r.kind = align::RecordKind::Comparison;
  r.task = "t";
  r.trajectories = {"a", "b"};
  r.rater = "x";
  std::int64_t first = 0;
  {
    AnnotationStore s(tmp.str("log.jsonl"));
    first = s.accept(r).timestamp;
  }
  AnnotationStore again(tmp.str("log.jsonl"));
  EXPECT_EQ(again.records().size(), 1u);
  EXPECT_THROW(again.accept(r), ConflictError);
  r.rater = "y";
  EXPECT_GT(again.accept(r).timestamp, first);
}
