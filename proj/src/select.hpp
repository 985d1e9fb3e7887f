// Copyright 2026 The fdplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FDPLACE_SRC_SELECT_HPP_
#define FDPLACE_SRC_SELECT_HPP_

#include <algorithm>
#include <iterator>
#include <utility>

namespace fdplace::detail {

template <class It, class Less>
void insertion_sort(It first, It last, Less less) {
  for (It i = first; i != last; ++i) {
    for (It j = i; j != first && less(*j, *std::prev(j)); --j) {
      std::iter_swap(j, std::prev(j));
    }
  }
}

// Worst-case linear selection (median of medians). On return *nth holds the
// element a full sort would put there, with no greater element before it and
// no smaller one after it.
template <class It, class Less>
void select_nth(It first, It nth, It last, Less less) {
  while (last - first > 5) {
    auto n = last - first;
    decltype(n) groups = 0;
    for (decltype(n) i = 0; i < n; i += 5) {
      It g = first + i;
      It g_end = first + std::min<decltype(n)>(i + 5, n);
      insertion_sort(g, g_end, less);
      std::iter_swap(first + groups, g + (g_end - g - 1) / 2);
      ++groups;
    }
    It mid = first + (groups - 1) / 2;
    select_nth(first, mid, first + groups, less);
    auto pivot = *mid;

    // Three-way partition: [first, lt) < pivot, [lt, gt) == pivot, rest >.
    It lt = first;
    It i = first;
    It gt = last;
    while (i < gt) {
      if (less(*i, pivot)) {
        std::iter_swap(lt++, i++);
      } else if (less(pivot, *i)) {
        std::iter_swap(i, --gt);
      } else {
        ++i;
      }
    }
    if (nth < lt) {
      last = lt;
    } else if (nth >= gt) {
      first = gt;
    } else {
      return;
    }
  }
  insertion_sort(first, last, less);
}

}  // namespace fdplace::detail

#endif  // FDPLACE_SRC_SELECT_HPP_
