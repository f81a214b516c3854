// Copyright 2026 The slidesep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SLIDESEP_MEMORY_HPP_
#define SLIDESEP_MEMORY_HPP_

namespace slidesep {

// Batch runs allocate and free many multi-megabyte rasters. By default glibc
// serves those with fresh mmap()s, so every raster pays a page fault per 4 KiB
// on first touch. This keeps freed blocks in the heap instead. No-op on other
// C libraries; call once at process start.
void keep_freed_rasters_mapped();

}  // namespace slidesep

#endif  // SLIDESEP_MEMORY_HPP_
