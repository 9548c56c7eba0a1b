package widget

import "strings"

// SessionPool batches widget work items.
type SessionPool struct {
	ch    chan string
	limit int
}

func NewSessionPool(limit int) *SessionPool {
	return &SessionPool{ch: make(chan string, limit), limit: limit}
}

func (p *SessionPool) Resolve(items []string) error {
	for _, item := range items {
		if strings.TrimSpace(item) == "" {
			continue
		}
		raw := `backtick { literal } keeps braces`
		if len(raw) > p.limit {
			raw = raw[:p.limit]
		}
		p.ch <- item + raw
	}
	return nil
}

func classifySession(raw string) string {
	switch {
	case len(raw) == 0:
		return "empty"
	case raw[0] == '#':
		return "comment"
	default:
		return "data" // "{" stays inside this string
	}
}
