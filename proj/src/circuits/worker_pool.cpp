#include "velopir/circuits/worker_pool.hpp"

#include <algorithm>
#include <atomic>
#include <exception>

namespace velopir::circuits {

struct WorkerPool::Batch {
  const std::function<void(std::size_t)>* fn = nullptr;
  std::size_t count = 0;
  std::size_t max_units = 0;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::size_t participants = 0;  // guarded by the pool mutex

  std::mutex done_mutex;
  std::condition_variable done_cv;
  std::exception_ptr error;
};

WorkerPool::WorkerPool(std::size_t workers) {
  const std::size_t helpers = workers > 1 ? workers - 1 : 0;
  threads_.reserve(helpers);
  for (std::size_t i = 0; i < helpers; ++i) threads_.emplace_back([this] { helper_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::drain(Batch& b) {
  for (;;) {
    const std::size_t i = b.next.fetch_add(1, std::memory_order_relaxed);
    if (i >= b.count) return;
    try {
      (*b.fn)(i);
    } catch (...) {
      std::lock_guard lock(b.done_mutex);
      if (!b.error) b.error = std::current_exception();
    }
    if (b.finished.fetch_add(1, std::memory_order_acq_rel) + 1 == b.count) {
      std::lock_guard lock(b.done_mutex);
      b.done_cv.notify_all();
    }
  }
}

void WorkerPool::helper_loop() {
  std::unique_lock lock(mutex_);
  for (;;) {
    std::shared_ptr<Batch> job;
    wake_.wait(lock, [&] {
      if (stopping_) return true;
      for (auto& b : open_)
        if (b->participants < b->max_units && b->next.load(std::memory_order_relaxed) < b->count) {
          job = b;
          return true;
        }
      return false;
    });
    if (!job) return;
    ++job->participants;
    lock.unlock();
    drain(*job);
    lock.lock();
    --job->participants;
    std::erase_if(open_, [](const std::shared_ptr<Batch>& b) {
      return b->next.load(std::memory_order_relaxed) >= b->count;
    });
  }
}

void WorkerPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                              std::size_t max_units) {
  if (count == 0) return;
  if (threads_.empty() || count == 1 || max_units <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  auto batch = std::make_shared<Batch>();
  batch->fn = &fn;
  batch->count = count;
  batch->max_units = std::min(max_units, count);
  {
    std::lock_guard lock(mutex_);
    batch->participants = 1;
    open_.push_back(batch);
  }
  wake_.notify_all();
  drain(*batch);
  {
    std::lock_guard lock(mutex_);
    --batch->participants;
    std::erase(open_, batch);
  }
  {
    std::unique_lock lock(batch->done_mutex);
    batch->done_cv.wait(lock, [&] { return batch->finished.load(std::memory_order_acquire) == count; });
  }
  if (batch->error) std::rethrow_exception(batch->error);
}

}  // namespace velopir::circuits
