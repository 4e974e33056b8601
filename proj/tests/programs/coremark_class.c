// CoreMark-class mix: linked-list search and merge sort, small matrix
// kernels, a text-scanning state machine and CRC16 over the results.
#ifdef HOST
#include <stdio.h>
#include <string.h>
#else
#include "runtime.h"
#endif

#define LIST_LEN 48
#define MAT_N 8
#define PASSES 6
#define EXPECTED_HASH 0x0427u

typedef struct node {
  struct node *next;
  short value;
  short index;
} node_t;

static node_t nodes[LIST_LEN];
static short mat_a[MAT_N][MAT_N], mat_b[MAT_N][MAT_N];
static int mat_c[MAT_N][MAT_N];

static unsigned seed = 0x1234u;
static unsigned rnd(void) {
  seed = seed * 1664525u + 1013904223u;
  return seed >> 8;
}

static unsigned short crc_update(unsigned char data, unsigned short crc) {
  for (int i = 0; i < 8; ++i) {
    const int carry = (data ^ crc) & 1;
    data >>= 1;
    crc >>= 1;
    if (carry) crc ^= 0xa001;
  }
  return crc;
}

static unsigned short crc16(int value, unsigned short crc) {
  crc = crc_update((unsigned char)value, crc);
  return crc_update((unsigned char)(value >> 8), crc);
}

static node_t *list_build(void) {
  for (int i = 0; i < LIST_LEN; ++i) {
    nodes[i].value = (short)(rnd() & 0x7fff);
    nodes[i].index = (short)i;
    nodes[i].next = i + 1 < LIST_LEN ? &nodes[i + 1] : 0;
  }
  return &nodes[0];
}

static node_t *list_find(node_t *list, short index, short value) {
  while (list) {
    if (index >= 0 && list->index == index) return list;
    if (index < 0 && (list->value & 0xff) == value) return list;
    list = list->next;
  }
  return 0;
}

static node_t *list_reverse(node_t *list) {
  node_t *prev = 0;
  while (list) {
    node_t *next = list->next;
    list->next = prev;
    prev = list;
    list = next;
  }
  return prev;
}

static int cmp_value(const node_t *a, const node_t *b) {
  if (a->value != b->value) return a->value < b->value ? -1 : 1;
  return a->index - b->index;
}

static int cmp_index(const node_t *a, const node_t *b) { return a->index - b->index; }

static node_t *list_sort(node_t *list, int (*cmp)(const node_t *, const node_t *)) {
  int insize = 1;
  for (;;) {
    node_t *p = list, *tail = 0;
    list = 0;
    int merges = 0;
    while (p) {
      ++merges;
      node_t *q = p;
      int psize = 0;
      for (int i = 0; i < insize && q; ++i) {
        ++psize;
        q = q->next;
      }
      int qsize = insize;
      while (psize > 0 || (qsize > 0 && q)) {
        node_t *e;
        if (psize == 0) {
          e = q;
          q = q->next;
          --qsize;
        } else if (qsize == 0 || !q || cmp(p, q) <= 0) {
          e = p;
          p = p->next;
          --psize;
        } else {
          e = q;
          q = q->next;
          --qsize;
        }
        if (tail) {
          tail->next = e;
        } else {
          list = e;
        }
        tail = e;
      }
      p = q;
    }
    tail->next = 0;
    if (merges <= 1) return list;
    insize *= 2;
  }
}

static unsigned short bench_list(unsigned short crc) {
  node_t *list = list_build();
  for (int i = 0; i < 8; ++i) {
    node_t *hit = list_find(list, -1, (short)(rnd() & 0xff));
    node_t *idx = list_find(list, (short)(i * 5), 0);
    crc = crc16(hit ? hit->value : -1, crc);
    crc = crc16(idx ? idx->value : -1, crc);
  }
  list = list_reverse(list);
  list = list_sort(list, cmp_value);
  for (node_t *n = list; n; n = n->next) crc = crc16(n->value, crc);
  list = list_sort(list, cmp_index);
  return crc16(list->value, crc);
}

static unsigned short bench_matrix(unsigned short crc) {
  for (int i = 0; i < MAT_N; ++i) {
    for (int j = 0; j < MAT_N; ++j) {
      mat_a[i][j] = (short)(rnd() & 0xff);
      mat_b[i][j] = (short)(rnd() & 0xff) - 128;
    }
  }
  for (int i = 0; i < MAT_N; ++i) {
    for (int j = 0; j < MAT_N; ++j) {
      int acc = 0;
      for (int k = 0; k < MAT_N; ++k) acc += mat_a[i][k] * mat_b[k][j];
      mat_c[i][j] = acc;
    }
  }
  int sum = 0;
  for (int i = 0; i < MAT_N; ++i) {
    for (int j = 0; j < MAT_N; ++j) {
      const int v = mat_c[i][j];
      if (v > 2000) {
        sum += 10;
      } else if (v < -2000) {
        sum -= 3;
      } else {
        sum += v & 1;
      }
      mat_a[i][j] = (short)(mat_a[i][j] + (v >> 4));
    }
  }
  return crc16(sum, crc);
}

enum state { S_START, S_INT, S_FLOAT, S_EXP, S_SCI, S_INVALID, S_COUNT };

static enum state next_token(const char **text, unsigned *counts) {
  const char *p = *text;
  enum state s = S_START;
  for (; *p && s != S_INVALID; ++p) {
    const char c = *p;
    if (c == ',') {
      ++p;
      break;
    }
    counts[s]++;
    switch (s) {
      case S_START:
        if (c >= '0' && c <= '9') {
          s = S_INT;
        } else if (c == '+' || c == '-') {
          s = S_INT;
        } else if (c == '.') {
          s = S_FLOAT;
        } else {
          s = S_INVALID;
        }
        break;
      case S_INT:
        if (c == '.') {
          s = S_FLOAT;
        } else if (c < '0' || c > '9') {
          s = S_INVALID;
        }
        break;
      case S_FLOAT:
        if (c == 'e' || c == 'E') {
          s = S_EXP;
        } else if (c < '0' || c > '9') {
          s = S_INVALID;
        }
        break;
      case S_EXP:
        s = (c == '+' || c == '-') ? S_SCI : S_INVALID;
        break;
      case S_SCI:
        if (c < '0' || c > '9') s = S_INVALID;
        break;
      default:
        break;
    }
  }
  *text = p;
  return s;
}

static unsigned short bench_state(unsigned short crc) {
  static const char *const inputs[] = {"5012", "1234", "-874", "+122", ".1e+4", "3.14", "-1.5e-3",
                                       "x-12", "0.5e", "12e3", "++1", "9.99"};
  char buf[160];
  char *w = buf;
  for (int i = 0; i < 16; ++i) {
    const char *src = inputs[rnd() % (sizeof inputs / sizeof inputs[0])];
    while (*src) *w++ = *src++;
    *w++ = ',';
  }
  *w = 0;
  unsigned counts[S_COUNT] = {0};
  unsigned finals[S_COUNT] = {0};
  const char *p = buf;
  while (*p) finals[next_token(&p, counts)]++;
  for (int i = 0; i < S_COUNT; ++i) {
    crc = crc16((int)counts[i], crc);
    crc = crc16((int)finals[i], crc);
  }
  return crc;
}

int main(void) {
  unsigned short crc = 0;
  for (int pass = 0; pass < PASSES; ++pass) {
    crc = bench_list(crc);
    crc = bench_matrix(crc);
    crc = bench_state(crc);
  }
#ifdef HOST
  printf("0x%04xu\n", crc);
  return 0;
#else
  return crc == EXPECTED_HASH ? 0 : 1;
#endif
}
