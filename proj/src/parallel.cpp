// SPDX-License-Identifier: Apache-2.0
//
// wavelab: link-level waveform simulation for delay-Doppler alignment modulation
// Copyright (C) 2026 The wavelab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wavelab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wavelab
{
    int worker_count()
    {
        if (const char *env = std::getenv("WAVELAB_THREADS"))
        {
            try
            {
                const int n = std::stoi(env);
                if (n > 0)
                    return n;
            }
            catch (const std::exception &)
            {
            }
        }
        return std::max(1, int(std::thread::hardware_concurrency()));
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min<std::size_t>(std::size_t(worker_count()), n);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&] {
            for (std::size_t i = next++; i < n && !failed; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < workers; ++t)
            pool.emplace_back(work);
        work();
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
    {
        // splitmix64 finalizer over the combined key
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

} // namespace wavelab
