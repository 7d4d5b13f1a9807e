#include <stdio.h>
#include <string.h>

#include "ordgram.h"

static const char *W2 = "order: b < a\nstart: Y\nY -> a Y | b X\nX -> a X | b\n";
static const char *W3 = "order: b < a\nstart: Z\nZ -> a Z | b Y\nY -> a Y | b X\nX -> a X | b\n";

int main(void) {
    OrdgramGrammar *g = NULL, *h = NULL;
    char *text = NULL;
    int same = -1, cmp = 2;

    if (ordgram_grammar_parse(W2, &g) != ORDGRAM_STATUS_OK) return 1;
    if (ordgram_grammar_parse(W3, &h) != ORDGRAM_STATUS_OK) return 1;
    if (ordgram_order_type(g, NULL, &text) != ORDGRAM_STATUS_OK) return 1;
    printf("%s\n", text);
    ordgram_string_free(text);
    if (ordgram_isomorphic(g, h, &same) != ORDGRAM_STATUS_OK) return 1;
    printf("%d\n", same);
    if (ordgram_ordinal_cmp("w^2", "w*3", &cmp) != ORDGRAM_STATUS_OK) return 1;
    printf("%d\n", cmp);
    ordgram_grammar_free(g);
    if (ordgram_grammar_parse("start: X\n", &g) != ORDGRAM_STATUS_PARSE_ERROR || g != NULL) return 1;
    printf("%s\n", ordgram_last_error() ? "error set" : "no error");
    ordgram_grammar_free(h);
    return 0;
}
