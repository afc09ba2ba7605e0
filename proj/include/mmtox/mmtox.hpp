// Copyright 2026 The mmtox Authors.
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


#pragma once

#include "mmtox/core.hpp"
#include "mmtox/corpus.hpp"
#include "mmtox/tokenize.hpp"
#include "mmtox/tfidf.hpp"
#include "mmtox/annotate.hpp"
#include "mmtox/templates.hpp"
#include "mmtox/geometry.hpp"
#include "mmtox/raster.hpp"
#include "mmtox/wav.hpp"
#include "mmtox/font.hpp"
#include "mmtox/layout.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/compose.hpp"
#include "mmtox/video.hpp"
#include "mmtox/manifest.hpp"
#include "mmtox/moderation.hpp"
#include "mmtox/http.hpp"
#include "mmtox/harness.hpp"
#include "mmtox/config.hpp"
#include "mmtox/campaign.hpp"
