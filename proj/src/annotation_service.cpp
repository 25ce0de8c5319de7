#include "mcu/annotation_service.hpp"

#include "mcu/autoeval.hpp"
#include "mcu/strings.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

namespace mcu::annot {

namespace fs = std::filesystem;
using json = nlohmann::json;

AnnotationStore::AnnotationStore(std::string path) : path_(std::move(path)) {
  if (path_.empty() || !fs::exists(path_)) return;
  for (auto& r : align::parse_annotations(str::read_file(path_))) {
    last_ts_ = std::max(last_ts_, r.timestamp);
    if (r.kind == align::RecordKind::Comparison) {
      auto key = align::canonical_pair(r.task, r.trajectories[0], r.trajectories[1]).first;
      pairs_.insert({key, r.rater});
      any_pairs_.insert(key);
    } else {
      ratings_.insert({r.trajectories[0], r.rater});
    }
    records_.push_back(std::move(r));
  }
  std::stable_sort(records_.begin(), records_.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
}

align::AnnotationRecord AnnotationStore::accept(align::AnnotationRecord r) {
  align::validate(r);
  std::lock_guard lk(mu_);
  if (r.kind == align::RecordKind::Comparison) {
    auto key = align::canonical_pair(r.task, r.trajectories[0], r.trajectories[1]).first;
    if (!pairs_.insert({key, r.rater}).second)
      throw ConflictError("rater " + r.rater + " already compared this pair");
    any_pairs_.insert(key);
  } else if (!ratings_.insert({r.trajectories[0], r.rater}).second) {
    throw ConflictError("rater " + r.rater + " already rated this trajectory");
  }
  auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count();
  r.timestamp = std::max<std::int64_t>(now, last_ts_ + 1);
  last_ts_ = r.timestamp;
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    out << align::to_json(r) << "\n";
    if (!out) throw Error("cannot append to " + path_);
  }
  records_.push_back(r);
  return r;
}

std::vector<align::AnnotationRecord> AnnotationStore::records() const {
  std::lock_guard lk(mu_);
  return records_;
}

std::string AnnotationStore::export_jsonl() const {
  std::lock_guard lk(mu_);
  std::string out;
  for (const auto& r : records_) out += align::to_json(r) + "\n";
  return out;
}

bool AnnotationStore::annotated(const align::PairKey& pair, const std::string& rater) const {
  std::lock_guard lk(mu_);
  return pairs_.count({pair, rater}) > 0;
}

bool AnnotationStore::annotated_by_anyone(const align::PairKey& pair) const {
  std::lock_guard lk(mu_);
  return any_pairs_.count(pair) > 0;
}

TrajectoryIndex TrajectoryIndex::scan(const std::string& root) {
  TrajectoryIndex idx;
  if (!fs::is_directory(root)) throw NotFoundError("no trajectory directory " + root);
  for (const auto& e : fs::directory_iterator(root)) {
    if (!e.is_directory() || !fs::exists(e.path() / "meta.json")) continue;
    auto meta = eval::trajectory_meta_from_json(str::read_file((e.path() / "meta.json").string()));
    idx.entries_[meta.id] = {meta.id, meta.task, e.path().string()};
    idx.by_task_[meta.task].push_back(meta.id);
  }
  for (auto& [task, ids] : idx.by_task_) std::sort(ids.begin(), ids.end());
  return idx;
}

const TrajectoryEntry* TrajectoryIndex::find(const std::string& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

AnnotationService::AnnotationService(ServiceConfig config)
    : config_(std::move(config)),
      index_(TrajectoryIndex::scan(config_.trajectories_dir)),
      store_(config_.export_path),
      server_(std::make_unique<httplib::Server>()),
      rng_(config_.seed) {
  install_routes();
}

AnnotationService::~AnnotationService() { stop(); }

namespace {

void error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

} // namespace

void AnnotationService::install_routes() {
  auto& s = *server_;

  s.Get("/tasks", [this](const httplib::Request&, httplib::Response& res) {
    json j = json::array();
    for (const auto& [task, ids] : index_.by_task())
      j.push_back({{"task", task}, {"trajectories", ids}, {"pairs", ids.size() * (ids.size() - 1) / 2}});
    res.set_content(j.dump(), "application/json");
  });

  s.Get("/pairs/next", [this](const httplib::Request& req, httplib::Response& res) {
    auto rater = req.has_param("rater") ? req.get_param_value("rater") : std::string();
    std::vector<std::string> tasks;
    if (req.has_param("task")) {
      auto task = req.get_param_value("task");
      if (!index_.by_task().count(task)) return error(res, 404, "unknown task");
      tasks.push_back(task);
    } else {
      for (const auto& [task, ids] : index_.by_task()) tasks.push_back(task);
    }
    std::vector<align::PairKey> open;
    for (const auto& task : tasks) {
      const auto& ids = index_.by_task().at(task);
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          align::PairKey key{task, ids[i], ids[j]};
          bool done = rater.empty() ? store_.annotated_by_anyone(key) : store_.annotated(key, rater);
          if (!done) open.push_back(std::move(key));
        }
    }
    if (open.empty()) {
      res.status = 204;
      return;
    }
    std::size_t pick, flip;
    {
      std::lock_guard lk(rng_mu_);
      pick = uniform_index(rng_, open.size());
      flip = uniform_index(rng_, 2);
    }
    const auto& k = open[pick];
    json j{{"task", k.task}, {"a", flip ? k.b : k.a}, {"b", flip ? k.a : k.b}};
    res.set_content(j.dump(), "application/json");
  });

  s.Get(R"(/trajectories/([^/]+)/video)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto* t = index_.find(req.matches[1]);
    if (!t) return error(res, 404, "unknown trajectory");
    for (const char* name : {"video.mp4", "video.webm"}) {
      auto p = fs::path(t->dir) / name;
      if (!fs::exists(p)) continue;
      auto bytes = eval::read_file_bytes(p.string());
      res.set_content(std::string(bytes.begin(), bytes.end()),
                      p.extension() == ".mp4" ? "video/mp4" : "video/webm");
      return;
    }
    error(res, 404, "trajectory has no video; use /frames");
  });

  s.Get(R"(/trajectories/([^/]+)/frames)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto* t = index_.find(req.matches[1]);
    if (!t) return error(res, 404, "unknown trajectory");
    try {
      auto traj = eval::read_trajectory(t->dir);
      json frames = json::array();
      if (!traj.frames.empty())
        for (auto i : eval::sample_frame_indices(traj.frames.size(), config_.frame_stride))
          frames.push_back({{"index", i},
                            {"url", "/trajectories/" + t->id + "/frames/" + eval::frame_file_name(i)}});
      res.set_content(json{{"id", t->id}, {"task", t->task}, {"fps", traj.meta.fps},
                           {"frame_count", traj.frames.size()}, {"frames", frames}}
                          .dump(),
                      "application/json");
    } catch (const Error& e) {
      error(res, 500, e.what());
    }
  });

  s.Get(R"(/trajectories/([^/]+)/frames/(\d{6}\.png))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto* t = index_.find(req.matches[1]);
    if (!t) return error(res, 404, "unknown trajectory");
    auto p = fs::path(t->dir) / "frames" / std::string(req.matches[2]);
    if (!fs::exists(p)) return error(res, 404, "unknown frame");
    auto bytes = eval::read_file_bytes(p.string());
    res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
  });

  auto post = [this](align::RecordKind kind) {
    return [this, kind](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        return error(res, 400, "body is not valid JSON");
      }
      if (!body.is_object()) return error(res, 400, "body must be an object");
      if (!body.contains("kind")) body["kind"] = std::string(align::to_string(kind));
      if (!body.contains("rater") || !body["rater"].is_string() || str::trim(body["rater"].get<std::string>()).empty())
        return error(res, 400, "rater id is required");
      body.erase("timestamp");
      align::AnnotationRecord r;
      try {
        r = align::annotation_from_json(body.dump());
      } catch (const ValidationError& e) {
        return error(res, 400, e.what());
      }
      if (r.kind != kind) return error(res, 400, "expected a " + std::string(align::to_string(kind)) + " record");
      for (const auto& id : r.trajectories) {
        const auto* t = index_.find(id);
        if (!t) return error(res, 404, "unknown trajectory " + id);
        if (t->task != r.task) return error(res, 400, "trajectory " + id + " belongs to another task");
      }
      try {
        auto stored = store_.accept(std::move(r));
        res.status = 201;
        res.set_content(align::to_json(stored), "application/json");
      } catch (const ConflictError& e) {
        error(res, 409, e.what());
      } catch (const ValidationError& e) {
        error(res, 400, e.what());
      }
    };
  };
  s.Post("/annotations", post(align::RecordKind::Comparison));
  s.Post("/ratings", post(align::RecordKind::Rating));

  s.Get("/annotations", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(store_.export_jsonl(), "application/x-ndjson");
  });
}

int AnnotationService::start(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void AnnotationService::run(const std::string& host, int port) {
  if (!server_->listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

void AnnotationService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

} // namespace mcu::annot
