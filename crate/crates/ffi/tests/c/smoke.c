#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "rpoisson.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long len = ftell(f);
    rewind(f);
    char *buf = malloc(len + 1);
    fread(buf, 1, len, f);
    buf[len] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc != 2) return 10;
    char *json = slurp(argv[1]);
    if (!json) return 11;

    RpManifold *m = NULL;
    if (rp_manifold_from_json(json, &m) != RP_STATUS_OK) {
        fprintf(stderr, "%s\n", rp_last_error_message());
        return 12;
    }
    bool rp = false;
    if (rp_is_riemann_poisson(m, &rp) != RP_STATUS_OK) return 13;
    size_t b1 = 0;
    if (rp_truncated_betti(m, 1, 3, &b1) != RP_STATUS_OK) return 14;
    char *report = NULL;
    if (rp_check_report_json(m, &report) != RP_STATUS_OK) return 15;

    printf("version=%s riemann_poisson=%d b1=%zu report_bytes=%zu\n",
           rp_version(), rp, b1, strlen(report));

    rp_string_free(report);
    rp_manifold_free(m);
    free(json);
    return 0;
}
