#pragma once

#include "mcu/alignment.hpp"
#include "mcu/random.hpp"
#include "mcu/trajectory.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace mcu::annot {

/// Thrown by the store; maps onto HTTP statuses.
class ConflictError : public Error {
public:
  using Error::Error;
};

/// Append-only record log. Timestamps are assigned on accept and strictly
/// increase, so the export order is total.
class AnnotationStore {
public:
  /// When `path` is non-empty, existing records are loaded from it and every
  /// accepted record is appended to it.
  explicit AnnotationStore(std::string path = {});

  /// Validates, rejects duplicates (ConflictError), stamps and appends.
  align::AnnotationRecord accept(align::AnnotationRecord r);
  std::vector<align::AnnotationRecord> records() const;
  std::string export_jsonl() const;
  bool annotated(const align::PairKey& pair, const std::string& rater) const;
  bool annotated_by_anyone(const align::PairKey& pair) const;

private:
  mutable std::mutex mu_;
  std::string path_;
  std::vector<align::AnnotationRecord> records_;
  std::set<std::pair<align::PairKey, std::string>> pairs_;
  std::set<align::PairKey> any_pairs_;
  std::set<std::pair<std::string, std::string>> ratings_;
  std::int64_t last_ts_ = 0;
};

struct TrajectoryEntry {
  std::string id;
  std::string task;
  std::string dir;
};

/// Trajectory directories found one level below a root.
class TrajectoryIndex {
public:
  static TrajectoryIndex scan(const std::string& root);
  const TrajectoryEntry* find(const std::string& id) const;
  /// task -> trajectory ids, sorted.
  const std::map<std::string, std::vector<std::string>>& by_task() const { return by_task_; }

private:
  std::map<std::string, TrajectoryEntry> entries_;
  std::map<std::string, std::vector<std::string>> by_task_;
};

struct ServiceConfig {
  std::string trajectories_dir;
  std::string export_path;  // empty: in-memory only
  std::uint64_t seed = 0;   // pair sampling
  std::size_t frame_stride = 30;
};

/// Endpoints:
///   GET  /tasks
///   GET  /pairs/next?task=...&rater=...      204 when nothing is left
///   GET  /trajectories/{id}/video
///   GET  /trajectories/{id}/frames           sampled frame list
///   GET  /trajectories/{id}/frames/{name}
///   POST /annotations                        comparison record, 201
///   POST /ratings                            rating record, 201
///   GET  /annotations                        line-delimited export
class AnnotationService {
public:
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  /// Binds and serves on a background thread; port 0 picks a free port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

  AnnotationStore& store() { return store_; }

private:
  void install_routes();

  ServiceConfig config_;
  TrajectoryIndex index_;
  AnnotationStore store_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex rng_mu_;
  Rng rng_;
};

} // namespace mcu::annot
