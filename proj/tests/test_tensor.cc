#include "jamlab/tensor.h"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "jamlab/radar_game.h"

namespace jamlab {
namespace {

std::shared_ptr<const RadarJamGame> make_game(int pulses, int subpulses, int freqs,
                                              Scenario scenario = Scenario::kFree) {
  RadarGameConfig config;
  config.num_pulses = pulses;
  config.num_subpulses = subpulses;
  config.num_freqs = freqs;
  config.scenario = scenario;
  if (freqs != 3) {
    config.physics.rcs.assign(static_cast<std::size_t>(freqs), 1.0);
  }
  return RadarJamGame::create(config);
}

int cell_index(const RadarJamGame& game, int channel, int freq, int slot, CellCode code) {
  const int slots = game.num_pulses() * game.num_subpulses();
  return ((channel * game.num_freqs() + freq) * slots + slot) * 4 + code;
}

// Every (channel, freq, slot) cell must carry exactly one code.
void expect_one_hot_cells(const RadarJamGame& game, const std::vector<double>& tensor) {
  ASSERT_EQ(static_cast<int>(tensor.size()), info_state_tensor_size(game.config()));
  for (std::size_t base = 0; base < tensor.size(); base += 4) {
    double sum = 0.0;
    for (int code = 0; code < 4; ++code) {
      const double v = tensor[base + code];
      EXPECT_TRUE(v == 0.0 || v == 1.0);
      sum += v;
    }
    ASSERT_EQ(sum, 1.0) << "cell at flat base " << base;
  }
}

CellCode cell_code(const RadarJamGame& game, const std::vector<double>& tensor,
                   int channel, int freq, int slot) {
  for (int code = 0; code < 4; ++code) {
    if (tensor[cell_index(game, channel, freq, slot, static_cast<CellCode>(code))] == 1.0) {
      return static_cast<CellCode>(code);
    }
  }
  ADD_FAILURE() << "no code set for channel " << channel << " f" << freq << " slot " << slot;
  return kCellPad;
}

TEST(Tensor, SizeFormula) {
  EXPECT_EQ(info_state_tensor_size(make_game(4, 3, 3)->config()), 288);
  EXPECT_EQ(info_state_tensor_size(make_game(2, 3, 3)->config()), 144);
  EXPECT_EQ(info_state_tensor_size(make_game(1, 1, 2)->config()), 16);
  EXPECT_EQ(info_state_tensor_size(make_game(3, 2, 4)->config()), 192);
}

TEST(Tensor, InitialFreeBoardIsAllEmpty) {
  const auto game = make_game(4, 3, 3);
  RadarJamState state(game);
  for (PlayerId viewer = 0; viewer < 2; ++viewer) {
    const auto tensor = encode_info_state(state, viewer);
    expect_one_hot_cells(*game, tensor);
    for (int channel = 0; channel < 2; ++channel) {
      for (int f = 0; f < 3; ++f) {
        for (int slot = 0; slot < 12; ++slot) {
          EXPECT_EQ(cell_code(*game, tensor, channel, f, slot), kCellEmpty);
        }
      }
    }
  }
}

TEST(Tensor, JammerViewHidesCurrentRadarTuple) {
  const auto game = make_game(2, 3, 3);
  RadarJamState state(game);
  state.apply_action(5);  // tuple (0, 1, 2)

  const auto jammer_view = encode_info_state(state, 1);
  expect_one_hot_cells(*game, jammer_view);
  for (int f = 0; f < 3; ++f) {
    for (int slot = 0; slot < 3; ++slot) {
      EXPECT_EQ(cell_code(*game, jammer_view, 0, f, slot), kCellUnknown);
    }
    for (int slot = 3; slot < 6; ++slot) {
      EXPECT_EQ(cell_code(*game, jammer_view, 0, f, slot), kCellEmpty);
    }
    for (int slot = 0; slot < 6; ++slot) {
      EXPECT_EQ(cell_code(*game, jammer_view, 1, f, slot), kCellEmpty);
    }
  }

  const auto radar_view = encode_info_state(state, 0);
  expect_one_hot_cells(*game, radar_view);
  const std::vector<int> tuple = {0, 1, 2};
  for (int f = 0; f < 3; ++f) {
    for (int slot = 0; slot < 3; ++slot) {
      const CellCode want = tuple[slot] == f ? kCellActive : kCellEmpty;
      EXPECT_EQ(cell_code(*game, radar_view, 0, f, slot), want);
    }
  }
}

TEST(Tensor, CompletedRoundIsPublic) {
  const auto game = make_game(2, 3, 3);
  RadarJamState state(game);
  state.apply_action(5);  // tuple (0, 1, 2)
  state.apply_action(4);  // Barrage

  const std::vector<int> tuple = {0, 1, 2};
  for (PlayerId viewer = 0; viewer < 2; ++viewer) {
    const auto tensor = encode_info_state(state, viewer);
    expect_one_hot_cells(*game, tensor);
    for (int f = 0; f < 3; ++f) {
      for (int slot = 0; slot < 3; ++slot) {
        const CellCode want = tuple[slot] == f ? kCellActive : kCellEmpty;
        EXPECT_EQ(cell_code(*game, tensor, 0, f, slot), want);
        EXPECT_EQ(cell_code(*game, tensor, 1, f, slot), kCellActive);  // barrage
      }
      for (int slot = 3; slot < 6; ++slot) {
        EXPECT_EQ(cell_code(*game, tensor, 0, f, slot), kCellEmpty);
        EXPECT_EQ(cell_code(*game, tensor, 1, f, slot), kCellEmpty);
      }
    }
  }
}

TEST(Tensor, SpotLightsOneRow) {
  const auto game = make_game(1, 3, 3);
  RadarJamState state(game);
  state.apply_action(game->encode_tuple({2, 2, 2}));
  state.apply_action(1);  // Spot f1
  for (PlayerId viewer = 0; viewer < 2; ++viewer) {
    const auto tensor = encode_info_state(state, viewer);
    expect_one_hot_cells(*game, tensor);
    for (int f = 0; f < 3; ++f) {
      for (int slot = 0; slot < 3; ++slot) {
        EXPECT_EQ(cell_code(*game, tensor, 1, f, slot),
                  f == 1 ? kCellActive : kCellEmpty);
      }
    }
  }
}

TEST(Tensor, ReactEmitsOnInterceptedCarrierFromSecondSubpulse) {
  const auto game = make_game(1, 3, 3);
  RadarJamState state(game);
  state.apply_action(game->encode_tuple({1, 0, 2}));  // intercepted carrier is f1
  state.apply_action(3);                              // React
  for (PlayerId viewer = 0; viewer < 2; ++viewer) {
    const auto tensor = encode_info_state(state, viewer);
    expect_one_hot_cells(*game, tensor);
    for (int f = 0; f < 3; ++f) {
      EXPECT_EQ(cell_code(*game, tensor, 1, f, 0), kCellEmpty);
      for (int slot = 1; slot < 3; ++slot) {
        EXPECT_EQ(cell_code(*game, tensor, 1, f, slot),
                  f == 1 ? kCellActive : kCellEmpty);
      }
    }
  }
}

TEST(Tensor, ScenarioPadsUnreachableCells) {
  // Case c: the jammer can only spot f0/f1, so every jammer f2 cell is a pad.
  const auto case_c = make_game(1, 3, 3, Scenario::kCaseC);
  RadarJamState state_c(case_c);
  const auto tensor_c = encode_info_state(state_c, 0);
  expect_one_hot_cells(*case_c, tensor_c);
  for (int slot = 0; slot < 3; ++slot) {
    EXPECT_EQ(cell_code(*case_c, tensor_c, 1, 0, slot), kCellEmpty);
    EXPECT_EQ(cell_code(*case_c, tensor_c, 1, 1, slot), kCellEmpty);
    EXPECT_EQ(cell_code(*case_c, tensor_c, 1, 2, slot), kCellPad);
    for (int f = 0; f < 3; ++f) {
      EXPECT_EQ(cell_code(*case_c, tensor_c, 0, f, slot), kCellEmpty);
    }
  }

  // Case d: React never reaches the first subpulse of a pulse.
  const auto case_d = make_game(2, 3, 3, Scenario::kCaseD);
  RadarJamState state_d(case_d);
  const auto tensor_d = encode_info_state(state_d, 1);
  expect_one_hot_cells(*case_d, tensor_d);
  for (int r = 0; r < 2; ++r) {
    for (int f = 0; f < 3; ++f) {
      EXPECT_EQ(cell_code(*case_d, tensor_d, 1, f, 3 * r + 0), kCellPad);
      EXPECT_EQ(cell_code(*case_d, tensor_d, 1, f, 3 * r + 1), kCellEmpty);
      EXPECT_EQ(cell_code(*case_d, tensor_d, 1, f, 3 * r + 2), kCellEmpty);
    }
  }
}

TEST(Tensor, RenderBoardInitialTinyGame) {
  const auto game = make_game(1, 1, 2);
  RadarJamState state(game);
  EXPECT_EQ(render_board(state, 0),
            "radar\n"
            "  f0 .\n"
            "  f1 .\n"
            "jammer\n"
            "  f0 .\n"
            "  f1 .\n");
}

TEST(Tensor, RenderBoardTerminalTinyGame) {
  const auto game = make_game(1, 1, 2);
  RadarJamState state(game);
  state.apply_action(0);  // tuple (0)
  state.apply_action(1);  // Spot f1
  EXPECT_EQ(render_board(state, 1),
            "radar\n"
            "  f0 #\n"
            "  f1 .\n"
            "jammer\n"
            "  f0 .\n"
            "  f1 #\n");
}

TEST(Tensor, RenderBoardSeparatesPulses) {
  const auto game = make_game(2, 3, 3);
  RadarJamState state(game);
  EXPECT_EQ(render_board(state, 0),
            "radar\n"
            "  f0 ... ...\n"
            "  f1 ... ...\n"
            "  f2 ... ...\n"
            "jammer\n"
            "  f0 ... ...\n"
            "  f1 ... ...\n"
            "  f2 ... ...\n");
}

TEST(Tensor, RenderBoardShowsUnknownAndPadGlyphs) {
  const auto game = make_game(1, 3, 3, Scenario::kCaseD);
  RadarJamState state(game);
  state.apply_action(0);  // radar committed, jammer to move
  EXPECT_EQ(render_board(state, 1),
            "radar\n"
            "  f0 ???\n"
            "  f1 ???\n"
            "  f2 ???\n"
            "jammer\n"
            "  f0 x..\n"
            "  f1 x..\n"
            "  f2 x..\n");
}

TEST(Tensor, BadViewerThrows) {
  const auto game = make_game(1, 1, 2);
  RadarJamState state(game);
  EXPECT_THROW(encode_info_state(state, 2), std::out_of_range);
  EXPECT_THROW(encode_info_state(state, -1), std::out_of_range);
}

}  // namespace
}  // namespace jamlab
