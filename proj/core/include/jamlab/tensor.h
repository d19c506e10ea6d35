#pragma once

#include <string>
#include <vector>

#include "jamlab/radar_game.h"

namespace jamlab {

// One-hot cell codes for the info-state tensor.
enum CellCode { kCellEmpty = 0, kCellActive = 1, kCellUnknown = 2, kCellPad = 3 };

// Flat tensor length: 2 channels x N carriers x (M*K) subpulse slots x 4 codes.
// 288 at the default M=4, K=3, N=3.
int info_state_tensor_size(const RadarGameConfig& config);

// Board encoding of what `viewer` knows at `state`. Channel 0 carries radar
// transmissions, channel 1 jammer emissions. Cells no legal action can ever
// touch under the scenario are coded kCellPad; the hidden current-round radar
// tuple is kCellUnknown from the jammer's seat. Layout:
// index = ((channel * N + freq) * (M*K) + slot) * 4 + code.
std::vector<double> encode_info_state(const RadarJamState& state, PlayerId viewer);

// Text rendering of the same view: two channel blocks of N rows x M*K glyph
// columns (pulses separated by a space), '.' empty, '#' active, '?' unknown,
// 'x' pad. Row f0 on top.
std::string render_board(const RadarJamState& state, PlayerId viewer);

}  // namespace jamlab
