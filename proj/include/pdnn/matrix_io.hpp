// SPDX-License-Identifier: Apache-2.0
//
// Matrix CSV: one row per matrix row, 2*cols fields "re,im,re,im,...".
// Channel dump: "PDNNCH01", u64 seed, u32 rows, u32 cols, then rows*cols
// (re, im) double pairs in row-major order, all little-endian.

#pragma once

#include <cstdint>
#include <iosfwd>

#include "pdnn/channel.hpp"
#include "pdnn/linalg.hpp"

namespace pdnn
{

void write_matrix_csv(std::ostream &os, const ComplexMatrix &m);
ComplexMatrix read_matrix_csv(std::istream &is);

void write_channel_binary(std::ostream &os, const ChannelRealization &channel);
ChannelRealization read_channel_binary(std::istream &is);

} // namespace pdnn
