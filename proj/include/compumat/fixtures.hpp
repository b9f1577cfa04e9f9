#pragma once

#include <utility>

#include "compumat/codegen.hpp"
#include "compumat/fold.hpp"
#include "compumat/layup.hpp"

namespace compumat::fixtures {

/// Battery sheet A (VBAT/GND pads 12 mm apart, plus an AUX pad) and LED
/// sheet B whose two LED pads land on A's supply pads at the identity mated
/// pose. B carries two more L1 pads that straddle A's supply pads after a
/// quarter turn, bridging VBAT to GND.
struct SplitLedOptions {
  bool mask_led_pad = false;  // b_l2 not exposed: the loop cannot close
  bool aux_short = false;     // extra B pad joins A:AUX onto A:VBAT at identity
};

std::pair<CompositeSheet, CompositeSheet> split_led_sheets(const MagnetPixelGrid& grid_a,
                                                           const MagnetPixelGrid& grid_b,
                                                           SplitLedOptions options = {});


/// Cross-shaped cube net: C in the middle with N, E, S, W around it and the
/// lid T beyond S. Creases, in order: C-N, C-S, C-E, C-W, S-T.
FoldNet cube_net_geometry(double face_mm = 20.0);

/// Grid that, placed at `pose`, lands where `grid` lands at the identity mated pose.
MagnetPixelGrid align_to_pose(const MagnetPixelGrid& grid, const Pose& pose);

struct CubeOptions {
  /// Wire both LED loops through pads on the same seam, on both sides, so
  /// each cube lights both LEDs.
  bool shared_led_flap = false;
};

/// Black/white cube: all creases +90 gives the black cube (fronts inside),
/// all -90 the white cube. The three code pairs bond C-E, S-W and N-T on the
/// inside surfaces of whichever cube forms. Battery on C; the N-T seam closes
/// LED_BLACK on the fronts and LED_WHITE on the backs.
FoldNet black_white_cube(const std::vector<CodePair>& codes, CubeOptions options = {});

/// Four faces in a row that roll into a square tube when every crease is +90;
/// a code pair on the F0 and F3 fronts bonds the seam and closes LED_TUBE.
FoldNet tube_strip(const CodePair& code);

/// Cube net with only an outward code on the lid (T back, black cube).
FoldNet labelled_cube(const MagnetPixelGrid& lid_code);

}  // namespace compumat::fixtures
