/* C API for the interferometric measurement simulator.
 *
 * All entry points return an ifm_status code; on failure ifm_last_error()
 * holds a message for the calling thread. Results come back as opaque table
 * handles (rows of named numeric columns, optionally labeled) that the
 * caller must release with ifm_table_free.
 *
 * Parameter text is "key: value" lines; scenario text is the circuit format
 * documented in the README.
 */
#ifndef IFM_C_H
#define IFM_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ifm_table ifm_table;

typedef enum ifm_status {
  IFM_OK = 0,
  IFM_ERR_PARSE = 1,            /* malformed parameter or scenario text */
  IFM_ERR_VALIDATION = 2,       /* parameters outside their domain */
  IFM_ERR_CONDITIONING = 3,     /* conditioning on a measure-zero event */
  IFM_ERR_UNKNOWN_PROTOCOL = 4,
  IFM_ERR_INTERNAL = 5
} ifm_status;

const char* ifm_version(void);

/* Message for the most recent failure on this thread; empty if none. */
const char* ifm_last_error(void);

/* Protocols: ev, ev_iterated, frontier, zeno, cavity, renninger, dicke,
 * irradiation, circuit (params_text is a scenario), nested. */
int ifm_run_protocol(const char* protocol, const char* params_text, ifm_table** out);

/* Exactly one parameter must carry a grid expression ("1..200", "a,b,c"). */
int ifm_sweep_protocol(const char* protocol, const char* params_text, ifm_table** out);

/* Scenario text with a postselect line; emits the local trace grid
 * (one row per mode, one column per step). */
int ifm_run_trace(const char* scenario_text, ifm_table** out);

/* Paired interferometers with a shared working area. Params: R, coupled. */
int ifm_run_nested(const char* params_text, ifm_table** out);

size_t ifm_table_rows(const ifm_table* table);
size_t ifm_table_cols(const ifm_table* table);
const char* ifm_table_column_name(const ifm_table* table, size_t col);
double ifm_table_value(const ifm_table* table, size_t row, size_t col);

/* Name of the label column, or NULL when rows are unlabeled. */
const char* ifm_table_label_name(const ifm_table* table);
const char* ifm_table_row_label(const ifm_table* table, size_t row);

void ifm_table_free(ifm_table* table);

#ifdef __cplusplus
}
#endif

#endif /* IFM_C_H */
