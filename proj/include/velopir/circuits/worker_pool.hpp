#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace velopir::circuits {

/// Fixed set of helper threads that cooperate on index ranges.
///
/// parallel_for(count, fn) runs fn(0..count-1) with the calling thread
/// taking part, and returns once every index has finished. Calls may nest:
/// a task can itself call parallel_for, and because the caller always
/// drains its own range there is no deadlock when every helper is busy.
/// The first exception thrown by a task is rethrown to the caller after the
/// range completes.
class WorkerPool {
 public:
  /// `workers` counts the caller, so workers - 1 threads are started.
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return threads_.size() + 1; }

  /// At most max_units threads (caller included) work on this range.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                    std::size_t max_units = std::numeric_limits<std::size_t>::max());

 private:
  struct Batch;
  void helper_loop();
  static void drain(Batch& b);

  std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<std::shared_ptr<Batch>> open_;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

/// Serial when no pool is attached.
class Executor {
 public:
  Executor() = default;
  explicit Executor(WorkerPool* pool) : pool_(pool) {}

  bool parallel() const { return pool_ != nullptr && pool_->size() > 1; }
  WorkerPool* pool() const { return pool_; }

  void run(std::size_t count, const std::function<void(std::size_t)>& fn,
           std::size_t max_units = std::numeric_limits<std::size_t>::max()) const {
    if (parallel()) {
      pool_->parallel_for(count, fn, max_units);
    } else {
      for (std::size_t i = 0; i < count; ++i) fn(i);
    }
  }

 private:
  WorkerPool* pool_ = nullptr;
};

}  // namespace velopir::circuits
