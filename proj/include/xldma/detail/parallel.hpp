// SPDX-License-Identifier: Apache-2.0
//
// xldma: near-field modeling and channel estimation for XL dynamic metasurface antennas
// Copyright (C) 2026 The xldma authors
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

#ifndef XLDMA_DETAIL_PARALLEL_HPP
#define XLDMA_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xldma
{
    template <typename Fn>
    void parallel_for(int count, int threads, Fn &&fn)
    {
        const int workers = std::max(1, std::min(threads, count));
        if (workers == 1)
        {
            for (int i = 0; i < count; ++i)
                fn(i);
            return;
        }
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&] {
            for (int i = next++; i < count && !failed; i = next++)
            {
                try
                {
                    fn(i);
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
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}

#endif
