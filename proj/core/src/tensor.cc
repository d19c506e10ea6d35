#include "jamlab/tensor.h"

#include <stdexcept>

namespace jamlab {

int info_state_tensor_size(const RadarGameConfig& config) {
  return 2 * config.num_freqs * config.num_pulses * config.num_subpulses * 4;
}

std::vector<double> encode_info_state(const RadarJamState& state, PlayerId viewer) {
  if (viewer != 0 && viewer != 1) throw std::out_of_range("bad viewer");
  const RadarJamGame& game = state.game();
  const int n = game.num_freqs();
  const int k = game.num_subpulses();
  const int m = game.num_pulses();
  const int slots = m * k;

  std::vector<double> out(2 * n * slots * 4, 0.0);
  auto set = [&](int channel, int freq, int slot, CellCode code) {
    out[((channel * n + freq) * slots + slot) * 4 + code] = 1.0;
  };

  const auto& history = state.history();
  const int len = static_cast<int>(history.size());
  for (int r = 0; r < m; ++r) {
    const bool radar_played = len > 2 * r;
    const bool radar_visible = state.radar_move_visible(viewer, r);
    const bool jam_played = len > 2 * r + 1;
    const std::vector<int>* tuple =
        radar_played ? &game.radar_tuple(history[2 * r]) : nullptr;

    for (int i = 0; i < k; ++i) {
      const int slot = r * k + i;
      // Radar channel.
      for (int f = 0; f < n; ++f) {
        if (!game.radar_cell_possible(f, i)) {
          set(0, f, slot, kCellPad);
        } else if (radar_played && !radar_visible) {
          set(0, f, slot, kCellUnknown);
        } else if (radar_visible && (*tuple)[i] == f) {
          set(0, f, slot, kCellActive);
        } else {
          set(0, f, slot, kCellEmpty);
        }
      }
      // Jammer channel: realized emissions of completed jam actions.
      for (int f = 0; f < n; ++f) {
        if (!game.jammer_cell_possible(f, i)) {
          set(1, f, slot, kCellPad);
          continue;
        }
        CellCode code = kCellEmpty;
        if (jam_played) {
          const auto& jam = game.jammer_menu()[history[2 * r + 1]];
          switch (jam.kind) {
            case JammerAction::kSpot:
              if (f == jam.freq) code = kCellActive;
              break;
            case JammerAction::kBarrage:
              code = kCellActive;
              break;
            case JammerAction::kReact:
              // Emits on the intercepted carrier from subpulse 1 on. Both
              // seats can resolve the row: the radar knows its tuple, the
              // jammer observed the intercept.
              if (i >= 1 && f == (*tuple)[0]) code = kCellActive;
              break;
          }
        }
        set(1, f, slot, code);
      }
    }
  }
  return out;
}

std::string render_board(const RadarJamState& state, PlayerId viewer) {
  const RadarJamGame& game = state.game();
  const int n = game.num_freqs();
  const int k = game.num_subpulses();
  const int m = game.num_pulses();
  const int slots = m * k;
  const auto tensor = encode_info_state(state, viewer);
  static constexpr char kGlyphs[4] = {'.', '#', '?', 'x'};

  std::string out;
  for (int channel = 0; channel < 2; ++channel) {
    out += channel == 0 ? "radar\n" : "jammer\n";
    for (int f = 0; f < n; ++f) {
      out += "  f" + std::to_string(f) + " ";
      for (int slot = 0; slot < slots; ++slot) {
        if (slot > 0 && slot % k == 0) out += ' ';
        const int base = ((channel * n + f) * slots + slot) * 4;
        for (int code = 0; code < 4; ++code) {
          if (tensor[base + code] == 1.0) out += kGlyphs[code];
        }
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace jamlab
