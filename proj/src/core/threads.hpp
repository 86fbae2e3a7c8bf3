#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace fcsp {

// Fixed pool with a blocking parallel_for. Each dispatch owns its state, so a
// worker draining a previous dispatch can never steal indices from the next
// one. The calling thread participates; a pool of size 1 is a plain loop.
class ThreadPool {
 public:
  explicit ThreadPool(int threads) {
    if (threads < 1) threads = 1;
    size_ = threads;
    for (int t = 0; t < threads - 1; ++t)
      workers_.emplace_back([this] { worker_loop(); });
  }

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  int size() const { return size_; }

  void parallel_for(int n, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (size_ == 1 || n == 1) {
      for (int i = 0; i < n; ++i) fn(i);
      return;
    }
    auto job = std::make_shared<Job>();
    job->fn = &fn;
    job->limit = n;
    job->pending.store(n, std::memory_order_relaxed);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      job_ = job;
    }
    cv_.notify_all();
    run(*job);
    {
      std::unique_lock<std::mutex> lock(mutex_);
      done_cv_.wait(lock, [&] { return job->pending.load(std::memory_order_acquire) == 0; });
      if (job_ == job) job_ = nullptr;
    }
  }

  static int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
  }

 private:
  struct Job {
    const std::function<void(int)>* fn = nullptr;
    std::atomic<int> next{0};
    std::atomic<int> pending{0};
    int limit = 0;
  };

  void run(Job& job) {
    while (true) {
      const int i = job.next.fetch_add(1, std::memory_order_relaxed);
      if (i >= job.limit) break;
      (*job.fn)(i);
      if (job.pending.fetch_sub(1, std::memory_order_acq_rel) == 1) {
        std::lock_guard<std::mutex> lock(mutex_);
        done_cv_.notify_all();
      }
    }
  }

  void worker_loop() {
    std::shared_ptr<Job> last;
    while (true) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return stop_ || (job_ && job_ != last); });
        if (stop_) return;
        job = job_;
      }
      last = job;
      run(*job);
    }
  }

  int size_ = 1;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable cv_, done_cv_;
  std::shared_ptr<Job> job_;
  bool stop_ = false;
};

}  // namespace fcsp
