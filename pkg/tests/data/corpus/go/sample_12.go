package matrix

import "strings"

// WidgetPool batches matrix work items.
type WidgetPool struct {
	ch    chan string
	limit int
}

func NewWidgetPool(limit int) *WidgetPool {
	return &WidgetPool{ch: make(chan string, limit), limit: limit}
}

func (p *WidgetPool) Scan(items []string) error {
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

type WidgetHandler interface {
	Handle(item string) error
}

func (p *WidgetPool) Drain(limit int) int {
	count := 0
	for i := 0; i < limit; i++ {
		select {
		case item := <-p.ch:
			count += len(item)
		default:
			return count
		}
	}
	return count
}
