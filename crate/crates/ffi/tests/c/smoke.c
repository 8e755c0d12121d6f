#include <stdio.h>
#include <string.h>

#include "qgame.h"

static const char *PD =
    "players: Alice Bob\n"
    "rows: C D\n"
    "cols: C D\n"
    "payoffs:\n"
    "C C 3 3\n"
    "C D 0 5\n"
    "D C 5 0\n"
    "D D 1 1\n";

int main(void) {
    QgGame *pd = NULL;
    QgGame *ext = NULL;
    size_t rows[9], cols[9], n = 0;

    if (qg_game_parse(PD, &pd) != QG_STATUS_OK) return 1;
    if (qg_quantize(pd, 1.5707963267948966, "C,D,Q", &ext) != QG_STATUS_OK) return 2;
    if (qg_game_pure_nash(ext, QG_NASH_KIND_STRICT, rows, cols, 9, &n) != QG_STATUS_OK) return 3;
    if (n != 1 || rows[0] != 2 || cols[0] != 2) return 4;
    if (qg_game_parse("players: A\n", &pd) != QG_STATUS_PARSE_ERROR) return 5;
    if (strlen(qg_last_error_message()) == 0) return 6;
    printf("strict nash (%zu,%zu)\n", rows[0], cols[0]);
    qg_game_free(ext);
    qg_game_free(pd);
    return 0;
}
